"""Post-generation refinement: level adjustment and static deduplication."""
from .dedup import (END_TOKENS, RULES, START_TOKENS, DedupConfig, DedupResult, Deduplicator,
                    LogSite, Removal, deduplicate, jaccard, message_equivalent, message_tokens)
from .levels import apply_refine_response, refine_level

__all__ = ["END_TOKENS", "RULES", "START_TOKENS", "DedupConfig", "DedupResult", "Deduplicator",
           "LogSite", "Removal", "deduplicate", "jaccard", "message_equivalent", "message_tokens",
           "apply_refine_response", "refine_level"]
