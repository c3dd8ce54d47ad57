import os
import tempfile

# keep the tau cache out of the user's home during test runs
os.environ.setdefault("GL1H_CACHE_DIR", os.path.join(tempfile.gettempdir(), "gl1h-test-cache"))
