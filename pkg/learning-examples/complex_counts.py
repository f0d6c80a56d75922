import os
import sys

sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), "..")))

from dotenv import load_dotenv
from realwdvv.complex_gw import solve_complex
from realwdvv.target import ProjectiveSpaceP3

load_dotenv()

MAX_DEGREE = int(os.getenv("REALWDVV_MAX_DEGREE", "3"))


def main():
    """
    Solves the associativity equations of quantum cohomology for P3 and prints
    the number of rational curves of each degree through a lines and b points.

    Only the three degree-one numbers are given; everything else follows.
    """
    target = ProjectiveSpaceP3()

    print(f"🚀 Solving complex WDVV for P3 up to degree {MAX_DEGREE}...")
    store = solve_complex(target, MAX_DEGREE)
    print(f"✅ {len(store)} invariants solved")
    print("---")

    current = None
    for key, value in store.items():
        if key.degree != current:
            current = key.degree
            print(f"📐 Degree {current}")
        print(f"   {key.lines} lines, {key.points} points: {value}")
    print("---")

    # Conics through 8 lines and twisted cubics through 6 points.
    if MAX_DEGREE >= 2:
        print(f"🎯 N_2(l^8)  = {store.invariant(2, 8, 0)}")
    if MAX_DEGREE >= 3:
        print(f"🎯 N_3(pt^6) = {store.invariant(3, 0, 6)}")


if __name__ == "__main__":
    try:
        main()
    except KeyboardInterrupt:
        print("\n🛑 Stopped by user")
    except Exception as e:
        print(f"❌ Error: {e}")
