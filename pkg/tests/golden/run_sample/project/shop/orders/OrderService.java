package shop.orders;

import java.util.ArrayList;
import java.util.List;
import java.util.Map;
import org.slf4j.Logger;
import org.slf4j.LoggerFactory;
import shop.store.Inventory;

public class OrderService {
    private static final Logger LOG = LoggerFactory.getLogger(OrderService.class);

    private final Inventory inventory;
    private final List<String> pending = new ArrayList<>();
    private int processed;

    public OrderService(Inventory inventory) {
        LOG.info("Starting order service: {}", inventory);
        this.inventory = inventory;
    }

    /** Places one order and returns its id, or null when stock is short. */
    public String placeOrder(String item, int quantity) {
        int available = inventory.stockOf(item);
        if (available < quantity) {
            LOG.warn("Unexpected state in place order: {}", available);
            return null;
        }
        String id = item + "-" + processed;
        inventory.reserve(item, quantity);
        processed++;
        return id;
    }

    public int flush(Map<String, Integer> orders) {
        int failures = 0;
        for (Map.Entry<String, Integer> entry : orders.entrySet()) {
            LOG.debug("Iterating in flush: {}", entry);
            try {
                String id = placeOrder(entry.getKey(), entry.getValue());
                if (id == null) {
                    LOG.warn("Unexpected state in flush: {}", id);
                    failures++;
                } else {
                    LOG.info("Falling back in flush: {}", id);
                    pending.add(id);
                }
            } catch (IllegalStateException e) {
                LOG.error("Failed to flush: {}", e);
                failures++;
            }
        }
        return failures;
    }

    public void cancel(String id) {
        if (!pending.remove(id)) {
            LOG.warn("Unexpected state in cancel: {}", id);
            throw new IllegalArgumentException("unknown order " + id);
        }
    }

    public int pendingCount() {
        LOG.info("Starting pending count");
        return pending.size();
    }
}
