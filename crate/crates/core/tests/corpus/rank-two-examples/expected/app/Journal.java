package app;

import com.lib.Log;

public class Journal {
    private Log log;

    void info(String msg) {
        log.print(msg);
    }

    String tag() {
        return "!";
    }

    void error(String msg) {
        log.error(tag() + msg);
    }

    void audit(String msg) {
        System.out.println(msg);
    }

    void trace(String msg) {
        System.err.println(msg);
    }

    void warn(String msg) {
        log.error(tag() + msg);
    }
}
