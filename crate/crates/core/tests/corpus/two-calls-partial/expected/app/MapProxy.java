package app;

import com.lib.Data;

public class MapProxy {
    private NodeContext ctx;

    Data toData(Object value) {
        Data data = ctx.serialization().toData(value);
        return data;
    }

    void audit(String msg) {
        System.out.println(msg);
    }

    void trace(String msg) {
        System.err.println(msg);
    }

    Data merged(Object value, Object other) {
        Data data = ctx.serialization().toData(value).merge(ctx.serialization().toData(other));
        return data;
    }
}
