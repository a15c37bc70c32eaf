package shop.store;

import java.util.HashMap;
import java.util.Map;

public class Inventory {
    private static final org.slf4j.Logger LOG = org.slf4j.LoggerFactory.getLogger(Inventory.class);
    private final Map<String, Integer> stock = new HashMap<>();

    public int stockOf(String item) {
        LOG.info("Starting stock of: {}", item);
        Integer count = stock.get(item);
        return count == null ? 0 : count;
    }

    public void restock(String item, int count) {
        if (count <= 0) {
            throw new IllegalArgumentException("count must be positive");
        }
        stock.merge(item, count, Integer::sum);
    }

    public void reserve(String item, int quantity) {
        int left = stockOf(item) - quantity;
        if (left < 0) {
            LOG.warn("stock went negative");
            throw new IllegalStateException("stock went negative");
        }
        stock.put(item, left);
    }
}
