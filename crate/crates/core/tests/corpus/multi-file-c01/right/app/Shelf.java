package app;

public class Shelf {
    private int slots;

    int capacity() {
        Widget w = new Widget();
        w.resize(slots);
        return w.size();
    }
}
