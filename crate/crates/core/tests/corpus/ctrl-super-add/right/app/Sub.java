package app;

public class Sub extends Base {

    long total() {
        return 1;
    }
}
