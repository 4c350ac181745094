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

    public long size() {
        return width * height;
    }
}
