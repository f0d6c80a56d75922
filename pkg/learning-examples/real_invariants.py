import os
import sys

sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), "..")))

from dotenv import load_dotenv
from realwdvv.complex_gw import solve_complex
from realwdvv.config import parse_seed
from realwdvv.real_wdvv import solve_real
from realwdvv.target import ProjectiveSpaceP3

load_dotenv()

MAX_DEGREE = int(os.getenv("REALWDVV_MAX_DEGREE", "3"))
SEED = parse_seed(os.getenv("REALWDVV_SEED", "+1"))


def main():
    """
    Computes the open invariants <l^a pt^b>_d of (P3, tau3) from the single
    degree-one number <>_1 = SEED.

    a counts conjugate pairs of averaged lines, b conjugate pairs of points;
    the remaining k = 2d - a - 2b constraints are real points.
    """
    target = ProjectiveSpaceP3()
    complex_store = solve_complex(target, MAX_DEGREE)

    print(f"🚀 Solving real WDVV up to degree {MAX_DEGREE} with seed {SEED:+d}...")
    store = solve_real(target, complex_store, MAX_DEGREE, SEED)
    print(f"✅ {len(store)} open invariants solved")
    print("---")

    for degree in range(1, MAX_DEGREE + 1):
        print(f"📐 Degree {degree}")
        for lines in range(2 * degree + 1):
            for points in range((2 * degree - lines) // 2 + 1):
                value = store.invariant(degree, lines, points)
                k = 2 * degree - lines - 2 * points
                marker = "  (d + a even)" if (degree + lines) % 2 == 0 else ""
                print(f"   a={lines} b={points} k={k}: {value}{marker}")
        print("---")

    violations = store.parity_violations()
    if violations:
        print(f"⚠️ {len(violations)} invariants break parity vanishing")
    else:
        print("🎯 Every invariant with d + a even vanishes")


if __name__ == "__main__":
    try:
        main()
    except KeyboardInterrupt:
        print("\n🛑 Stopped by user")
    except Exception as e:
        print(f"❌ Error: {e}")
