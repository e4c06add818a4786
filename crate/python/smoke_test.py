#!/usr/bin/env python3
"""Smoke test for the gravprobe_py extension module.

Builds nothing itself: run `cargo build -p gravprobe-py --release` first,
then `python3 python/smoke_test.py`. The script copies the cdylib into a
temporary directory under the importable module name.
"""

import math
import pathlib
import shutil
import sys
import tempfile

ROOT = pathlib.Path(__file__).resolve().parent.parent


def locate_cdylib() -> pathlib.Path:
    candidates = [
        ROOT / "target" / "release" / "libgravprobe_py.so",
        ROOT / "target" / "debug" / "libgravprobe_py.so",
        ROOT / "target" / "release" / "libgravprobe_py.dylib",
        ROOT / "target" / "debug" / "libgravprobe_py.dylib",
    ]
    for path in candidates:
        if path.exists():
            return path
    sys.exit("build the module first: cargo build -p gravprobe-py --release")


def close(a: float, b: float, rel: float = 1e-9) -> bool:
    return math.isclose(a, b, rel_tol=rel, abs_tol=0.0)


def main() -> None:
    cdylib = locate_cdylib()
    with tempfile.TemporaryDirectory() as tmp:
        # python extension modules use the .so suffix on linux and macos alike
        shutil.copy(cdylib, pathlib.Path(tmp) / "gravprobe_py.so")
        sys.path.insert(0, tmp)
        import gravprobe_py as gp

        print(f"gravprobe_py {gp.version()}")

        # oscillator closed forms (natural units, omega = 1)
        assert close(gp.ho_eigenstate_qfi(1.0, 0), 39.0 / 8.0)
        assert close(gp.ho_eigenstate_qfi(1.0, 1), 315.0 / 8.0)
        assert close(gp.ho_static_superposition_qfi(1.0, 0, 1), 177.0 / 8.0)
        assert close(gp.ho_superposition_qfi(1.0, 1, 1.0), 9.0)

        # 2D oscillator values and ratios
        assert close(gp.ho2d_qfi(1.0, "00"), 17.0)
        assert close(gp.ho2d_qfi(1.0, "10"), 75.0)
        assert close(gp.ho2d_qfi(1.0, "00+01"), 46.0)
        assert close(gp.ho2d_weighted_ratio("00"), 68.0 / 39.0)
        assert close(gp.ho2d_weighted_ratio("10"), 100.0 / 59.0)

        # dimensional enhancement is exactly 8 and 27 on the diagonal
        assert gp.isw_weighted_ratio([3, 3]) == 8.0
        assert gp.isw_weighted_ratio([4, 4, 4]) == 27.0
        assert close(gp.isw_weighted_ratio([2, 1]), 441.0 / 225.0)

        # infinite well superposition, a = t = 1 natural: pi^8 (N^4-1)^2
        assert close(gp.isw_superposition_qfi(1.0, [2], 1.0), math.pi**8 * 225.0)

        # free Gaussian packet at p0 = 0, sigma = 1, t = 1: 32 * 12
        assert close(gp.free_gaussian_qfi(0.0, 1.0, 1.0), 384.0)

        # finite well: z0^2 = 20 binds three states; energies below depth
        spectrum = gp.fsw_bound_spectrum(1.0, 10.0)
        assert spectrum["count"] == 3
        assert all(0.0 < e < 10.0 for e in spectrum["energies"])
        assert gp.fsw_ground_qfi(1.0, 10.0) > 0.0

        # optimal preparation picks the extremal corrections
        assert gp.optimal_two_level_probe([4.0, 1.0, 9.0]) == (1, 2)

        # commuting-superposition variance form
        assert close(gp.qfi_commuting_superposition([0.5, 0.5], [0.0, 2.0], 1.0), 4.0)

        # table rows carry the exact rationals
        rows = gp.table1()
        assert len(rows) == 4
        assert close(rows[0]["qfi_2d"], 17.0)
        assert close(rows[0]["weighted_ratio"], 68.0 / 39.0)

        print("smoke test passed:", len(rows), "table rows,",
              spectrum["count"], "bound states at z0^2 = 20")


if __name__ == "__main__":
    main()
