package app;

public interface Shape {
    String name();

    int corners();
}
