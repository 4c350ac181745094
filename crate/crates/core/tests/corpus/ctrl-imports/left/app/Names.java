package app;

import java.util.List;
import java.util.Set;

public class Names {
    private String first;
    private List<String> all;

    String first() {
        return first;
    }

    void audit(String msg) {
        System.out.println(msg);
    }

    void trace(String msg) {
        System.err.println(msg);
    }
}
