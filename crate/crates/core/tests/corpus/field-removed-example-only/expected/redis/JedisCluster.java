package redis;

import com.lib.ConnectionHandler;
import com.lib.JedisClusterCommand;
import java.util.Set;

public class JedisCluster {
    private int maxRedirections;
    private ConnectionHandler connectionHandler;

    public String get(final String key) {
        return new JedisClusterCommand<String>(connectionHandler, maxRedirections).run(key);
    }

    void audit(String msg) {
        System.out.println(msg);
    }

    void trace(String msg) {
        System.err.println(msg);
    }

    public Set<String> spop(final String key) {
        return new JedisClusterCommand<Set<String>>(connectionHandler, maxRedirections).run(key);
    }
}
