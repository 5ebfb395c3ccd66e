"""Builds the extension module and exercises each binding once.

    python3 python/smoke_test.py
"""

import shutil
import subprocess
import sys
import tempfile
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
FIXTURES = ROOT / "crates" / "core" / "fixtures"


def load_module():
    subprocess.run(
        ["cargo", "build", "-p", "ptmtopo-py", "--features", "extension-module"],
        cwd=ROOT,
        check=True,
    )
    built = ROOT / "target" / "debug" / "libptmtopo.so"
    tmp = Path(tempfile.mkdtemp())
    shutil.copy(built, tmp / "ptmtopo.so")
    sys.path.insert(0, str(tmp))
    import ptmtopo

    return ptmtopo


def main():
    pt = load_module()

    echo = pt.Machine((FIXTURES / "echo.ptm").read_text())
    assert echo.run_stream(["a", "bc"], fuel=50) == [("a", "a"), ("bc", "bc")]
    assert echo.macrostep("", "ab", 50) == [("ab", "ab")]
    loop = pt.Machine((FIXTURES / "loop.ptm").read_text())
    assert loop.run_stream(["a", "b"], fuel=10) == [("a", "!")]
    try:
        pt.Machine("alphabet: a\nstates: q0\ninitial: q0\nrule: q0 a * _ -> H a R R\n")
    except ValueError as e:
        assert "line 4" in str(e)
    else:
        raise AssertionError("input write accepted")

    fork = pt.Its((FIXTURES / "its" / "fork.its").read_text())
    join = pt.Its((FIXTURES / "its" / "join.its").read_text())
    assert fork.iso(join) is None
    assert not fork.bisimilar(join)
    assert fork.bisim_witness(join) is not None
    assert fork.stream_equiv(join, 2)
    assert fork.separating_trace(join, 3) == "a/x b/y c/c"
    assert pt.classify([fork, join], "stream", 2) == [[0, 1]]
    assert pt.classify([fork, join], "stream", 3) == [[0], [1]]
    e1 = echo.extract_its("a", 1, 2, 50)
    assert e1.num_states() == 2 and e1.iso(e1) is not None

    torus = pt.Complex.parse((FIXTURES / "torus7.cplx").read_text())
    assert torus.betti(2) == [1, 2, 1]
    assert torus.euler_characteristic() == 0 and torus.genus() == 1
    assert torus.classify_loop([0, 2, 4, 6, 1, 3, 5, 0]) == ([1, 0], False)
    assert pt.Complex([[0, 1, 2]]).counts() == [3, 3, 1]

    bars = pt.persistence((FIXTURES / "tri-fill.filt").read_text(), 2)
    assert (1, 0.0, 1.0) in bars and (0, 0.0, None) in bars

    latch = pt.Machine((FIXTURES / "latch.ptm").read_text())
    snaps, deltas = pt.build_env(latch, ["", "a", "ab", "bc", "", ""], "5/2", fuel=100)
    assert snaps[-1] == (6, 5, [1, 1, 0])
    assert "5: (0, 1, 0)" in deltas
    print("python smoke test passed")


if __name__ == "__main__":
    main()
