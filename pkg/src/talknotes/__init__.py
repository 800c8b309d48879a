"""talknotes: a real-time think-aloud annotation engine.

Streaming speech transcripts and pointer activity come in; spatially
anchored notes, topical threads, proactive tips/reminders and a replayable
session log come out.
"""

__version__ = "0.1.0"
