package app;

public class Base {
    protected int count;

    int weight() {
        return 1;
    }

    int tally() {
        return count;
    }
}
