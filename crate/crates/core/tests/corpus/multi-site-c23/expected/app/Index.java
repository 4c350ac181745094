package app;

public class Index {
    private int buckets;

    int slot(String key) {
        int h = key.hashCode();
        return h % buckets;
    }

    void audit(String msg) {
        System.out.println(msg);
    }

    void trace(String msg) {
        System.err.println(msg);
    }

    boolean probe(String key, String key2) {
        int h = key.hashCode();
        int h2 = key2.hashCode();
        return h > h2;
    }
}
