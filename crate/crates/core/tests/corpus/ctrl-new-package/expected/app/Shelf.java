package app;

public class Shelf {
    private int slots;

    int capacity() {
        Shop w = new Shop();
        return slots;
    }
}
