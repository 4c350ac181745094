package app;

public class Calc {
    private int base;

    int calculate(int x) {
        return base * x + 1;
    }

    int prepare(int y) {
        return calculate(y) * 3;
    }

    void audit(String msg) {
        System.out.println(msg);
    }

    void trace(String msg) {
        System.err.println(msg);
    }
}
