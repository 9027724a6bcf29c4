import hashlib
import json
import logging
import os
import threading
from pathlib import Path

from ..exceptions import CassetteMiss

logger = logging.getLogger(__name__)

CASSETTE_VERSION = 1


def request_digest(payload):
    """SHA-256 over the canonical JSON form of a request payload"""
    canonical = json.dumps(payload, sort_keys=True, ensure_ascii=False, separators=(',', ':'))
    return hashlib.sha256(canonical.encode('utf-8')).hexdigest()


class Cassette:
    """Digest-keyed JSON store of recorded tool/model interactions.

    Read-only while replaying; appended to (single writer, whole-file
    rewrite) while recording.
    """

    def __init__(self, path):
        self.path = Path(path)
        self._lock = threading.Lock()
        self.entries = {}
        if self.path.exists():
            self.load()

    def load(self):
        with open(self.path, 'r', encoding='utf-8') as f:
            data = json.load(f)
        self.entries = dict(data.get('entries', {}))
        logger.debug(f"Loaded {len(self.entries)} cassette entries from {self.path}")

    def __contains__(self, key):
        return key in self.entries

    def __len__(self):
        return len(self.entries)

    def get(self, key):
        try:
            return self.entries[key]
        except KeyError:
            raise CassetteMiss(key, cassette=str(self.path)) from None

    def put(self, key, entry):
        with self._lock:
            self.entries[key] = entry
            self._save()

    def _save(self):
        self.path.parent.mkdir(parents=True, exist_ok=True)
        tmp_path = self.path.with_name(self.path.name + '.tmp')
        with open(tmp_path, 'w', encoding='utf-8') as f:
            json.dump(
                {'version': CASSETTE_VERSION, 'entries': self.entries},
                f, ensure_ascii=False, indent=2, sort_keys=True,
            )
            f.write('\n')
        os.replace(tmp_path, self.path)
