package app;

import java.util.Map;
import java.util.List;

public class Repo {
    private Map<String, String> data;

    Iterable<String> keys() {
        return null;
    }

    int size() {
        return data.size();
    }

    void audit(String msg) {
        System.out.println(msg);
    }

    void trace(String msg) {
        System.err.println(msg);
    }

    int count(List<String> items) {
        return items.size();
    }
}
