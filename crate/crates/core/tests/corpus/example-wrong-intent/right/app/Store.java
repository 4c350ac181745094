package app;

public class Store {
    private Cache cache;
    private String id;

    Store(String id) {
        this.id = id;
        cache = new Cache(id);
    }

    void init() {
        cache = new Cache(id);
        audit(id);
    }

    void audit(String msg) {
        System.out.println(msg);
    }

    void trace(String msg) {
        System.err.println(msg);
    }
}
