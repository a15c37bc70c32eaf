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
        this.inventory = inventory;
    }

    /** Places one order and returns its id, or null when stock is short. */
    public String placeOrder(String item, int quantity) {
        LOG.info("Placing order for {} x{}", item, quantity);
        int available = inventory.stockOf(item);
        if (available < quantity) {
            LOG.warn("Not enough stock for {}: {} left", item, available);
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
            try {
                String id = placeOrder(entry.getKey(), entry.getValue());
                if (id == null) {
                    failures++;
                } else {
                    pending.add(id);
                }
            } catch (IllegalStateException e) {
                LOG.error("Order for {} failed", entry.getKey(), e);
                failures++;
            }
        }
        LOG.debug("Flushed {} orders with {} failures", orders.size(), failures);
        return failures;
    }

    public void cancel(String id) {
        if (!pending.remove(id)) {
            throw new IllegalArgumentException("unknown order " + id);
        }
        LOG.info("Cancelled order {}", id);
    }

    public int pendingCount() {
        return pending.size();
    }
}
