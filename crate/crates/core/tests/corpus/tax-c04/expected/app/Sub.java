package app;

public class Sub extends Base {

    @Override
    long level() {
        return 3;
    }
}
