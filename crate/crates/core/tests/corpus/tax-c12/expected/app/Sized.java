package app;

public interface Sized {
    int size();
}
