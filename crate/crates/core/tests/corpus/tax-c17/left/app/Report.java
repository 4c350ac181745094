package app;

public class Report {
    private String title;

    String render(String body) {
        Formatter formatter = new Formatter();
        String head = formatter.format(title);
        return head + body;
    }

    void audit(String msg) {
        System.out.println(msg);
    }

    void trace(String msg) {
        System.err.println(msg);
    }
}
