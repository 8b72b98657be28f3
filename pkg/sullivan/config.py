# Central config so magic numbers live in one place.
# Edit env vars (preferred) or change defaults here.
import os
from pathlib import Path

# threads used for per-degree verification batches (1 = run inline)
WORKERS      = int(os.getenv("SULLIVAN_WORKERS", "4"))

# degree cap used by the CLI when --cap is omitted
DEFAULT_CAP  = int(os.getenv("SULLIVAN_CAP", "12"))

# JSONL run logs, rotated into <LOG_DIR>/archive after ROTATE_DAYS
LOG_DIR      = os.getenv("SULLIVAN_LOG_DIR", "logs")
ROTATE_DAYS  = int(os.getenv("SULLIVAN_ROTATE_DAYS", "7"))

# bundled group presentations (F.grp, G.grp)
DATA_DIR     = Path(os.getenv("SULLIVAN_DATA_DIR",
                              str(Path(__file__).resolve().parent.parent / "data")))
