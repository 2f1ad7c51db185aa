package ext;

import org.apache.commons.lang.StringUtils;
import org.slf4j.Logger;
import org.slf4j.LoggerFactory;

public class Client {
    private static final Logger LOG = LoggerFactory.getLogger(Client.class);

    public String trimAll(String input) {
        if (StringUtils.isBlank(input)) {
            LOG.warn("blank input");
            return "";
        }
        return StringUtils.strip(input);
    }
}
