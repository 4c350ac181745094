package app;

import com.lib.Log;

public class Journal {
    private String prefix;
    private Log log;

    void info(String msg) {
        log.print(prefix + msg);
    }

    String tag() {
        return "!";
    }

    void error(String msg) {
        log.error(prefix + msg);
    }

    void audit(String msg) {
        System.out.println(msg);
    }

    void trace(String msg) {
        System.err.println(msg);
    }
}
