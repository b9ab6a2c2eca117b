import json
import shutil
from pathlib import Path

import pytest

from galilean.corpus import bundled_corpus_dir


@pytest.fixture
def corpus_copy(tmp_path):
    dest = tmp_path / "corpus"
    shutil.copytree(bundled_corpus_dir(), dest)
    return dest


@pytest.fixture
def write_json(tmp_path):
    def write(name, data):
        path = tmp_path / name
        path.write_text(json.dumps(data), encoding="utf-8")
        return path
    return write


ROOT = Path(__file__).resolve().parent
