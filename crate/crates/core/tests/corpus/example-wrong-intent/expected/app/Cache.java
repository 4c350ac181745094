package app;

public class Cache {
    private String name;
    private int capacity;

    public Cache(String name, int capacity) {
        this.name = name;
        this.capacity = capacity;
    }

    public String name() {
        return name;
    }
}
