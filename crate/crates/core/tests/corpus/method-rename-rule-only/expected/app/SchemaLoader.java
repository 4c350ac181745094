package app;

public class SchemaLoader {
    private Schema schema;

    Schema load(String type) {
        return schema;
    }

    void audit(String msg) {
        System.out.println(msg);
    }

    void trace(String msg) {
        System.err.println(msg);
    }

    void resolveRef(String target) {
        schema.set$ref(target);
        audit(target);
    }
}
