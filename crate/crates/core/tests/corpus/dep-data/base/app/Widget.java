package app;

public class Widget {
    private int size;

    public Widget(int size) {
        this.size = size;
    }

    public int size() {
        return size;
    }

    public boolean empty() {
        return size == 0;
    }
}
