package app;

public class Config {
    public int limit() {
        return 8;
    }

    public int capacity() {
        return 16;
    }
}
