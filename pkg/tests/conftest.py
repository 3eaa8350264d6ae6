import sys
from pathlib import Path

import pytest
from hypothesis import settings

sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")

DATA = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def data_dir():
    return DATA


@pytest.fixture(scope="session")
def golden():
    from tablegrid import synth

    specs, page = synth.load_fixture(DATA / "golden.json")
    img, gt = synth.render(specs, page)
    return specs, page, img, gt


@pytest.fixture(scope="session")
def golden_files(tmp_path_factory, golden):
    from tablegrid import synth
    from tablegrid.raster import write_pgm

    _, _, img, gt = golden
    d = tmp_path_factory.mktemp("golden")
    write_pgm(d / "golden.pgm", img)
    (d / "golden.tsv").write_text(synth.emit_ocr_tsv(gt), encoding="utf-8")
    return d / "golden.pgm", d / "golden.tsv"
