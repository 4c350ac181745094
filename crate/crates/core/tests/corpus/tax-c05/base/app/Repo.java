package app;

import java.util.List;
import java.util.Map;

public class Repo {
    private Map<String, String> data;

    List<String> keys() {
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
}
