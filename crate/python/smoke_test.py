"""Smoke test for the holocode Python extension.

Build the extension first:

    cargo build --release -p holocode-py --features extension-module

The script copies target/release/libholocode_py.so (or the platform
equivalent) to a temporary directory as an importable module, unless
`holocode` is already importable.
"""

import importlib
import shutil
import sys
import tempfile
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent


def load_module():
    try:
        return importlib.import_module("holocode")
    except ImportError:
        pass
    release = ROOT / "target" / "release"
    for lib, ext in [("libholocode_py.so", ".so"), ("libholocode_py.dylib", ".so"), ("holocode_py.dll", ".pyd")]:
        if (release / lib).exists():
            staging = Path(tempfile.mkdtemp())
            shutil.copy(release / lib, staging / f"holocode{ext}")
            sys.path.insert(0, str(staging))
            return importlib.import_module("holocode")
    sys.exit("extension not built; run: cargo build --release -p holocode-py --features extension-module")


BITS = {"I": (0, 0), "X": (1, 0), "Z": (0, 1), "Y": (1, 1)}
LETTERS = {v: k for k, v in BITS.items()}


def multiply(a, b):
    (xa, za), (xb, zb) = BITS[a], BITS[b]
    return LETTERS[(xa ^ xb, za ^ zb)]


def main():
    hc = load_module()

    steane = hc.Seed("steane")
    assert steane.n == 7 and steane.k == 1
    assert steane.is_block_perfect()
    assert hc.Seed("five-qubit").is_perfect()
    assert not hc.Seed("scf").is_perfect()

    assert hc.tiling_counts("heptagon", 3) == (203, 43)
    assert hc.tiling_counts("pentagon", 3, "zero")[0] == 95

    code = hc.Code.build("heptagon", 2)
    assert (code.n, code.k, code.css) == (42, 8, True)
    d = code.distance()
    assert (d["bit_distance"], d["word_distance"], d["certified"]) == (9, 6, True)

    decoder = hc.Decoder(code)
    error = "I" * 10 + "Y" + "I" * 31
    syndrome = decoder.syndrome(error)
    correction, certified = decoder.decode(syndrome)
    assert certified and decoder.syndrome(correction) == syndrome
    residual = "".join(multiply(a, b) for a, b in zip(error, correction))
    assert decoder.logical_effect(residual) == "I" * code.k

    small = hc.simulate(hc.Code.build("heptagon", 1), trials=200, seed=3)
    large = hc.simulate(code, trials=200, seed=3)
    assert all(abs(s - (p * (1 - p) / m) ** 0.5) == 0 for _, m, _, p, s, _ in large.records())
    again = hc.simulate(code, trials=200, seed=3)
    assert again.records() == large.records()
    th = hc.threshold([small, large])
    assert 0.0 < th["p_th"] < 0.5
    p_fail, sigma = large.mixed(0.05)
    assert 0.0 <= p_fail <= 1.0 and sigma >= 0.0
    assert large.to_csv().startswith("family,variant,R,n,k,target,a,m,f,P,sigma,timeouts")

    assert hc.binomial_mix([(0.0, 0.0), (1.0, 0.0)], 0.25) == (0.25, 0.0)
    try:
        hc.Code.build("octagon", 1)
    except ValueError:
        pass
    else:
        raise AssertionError("unknown family accepted")

    print(f"holocode smoke test passed: {code!r}, threshold estimate {th['p_th']:.4f}")


if __name__ == "__main__":
    main()
