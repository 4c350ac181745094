package app;

public class Box {
    private int width;
    private int height;

    public int width() {
        return width;
    }

    public int height() {
        return height;
    }

    public int size() {
        return width * height;
    }
}
