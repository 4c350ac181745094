package app;

public class Widget {
    private int size;
    private String label;

    public int size() {
        return size;
    }

    public String label() {
        return label;
    }

    public void resize(int delta) {
        size = size + delta;
    }
}
