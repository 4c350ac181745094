package app;

public class Base {
    protected int count;

    int weight() {
        return 1;
    }

    void run(int n) {
        count = count + n;
    }
}
