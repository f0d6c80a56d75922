import os
import sys

sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), "..")))

from dotenv import load_dotenv
from realwdvv.complex_gw import solve_complex
from realwdvv.insertions import emit_table
from realwdvv.real_wdvv import solve_real
from realwdvv.target import ProjectiveSpaceP3

load_dotenv()

MAX_DEGREE = int(os.getenv("REALWDVV_MAX_DEGREE", "3"))


def main():
    """
    Expands each averaged-line invariant over the two line classes l- and l+
    and prints the minimum absolute value, a lower bound for the number of
    real curves through a conjugate pairs of lines and b of points.
    """
    target = ProjectiveSpaceP3()
    complex_store = solve_complex(target, MAX_DEGREE)
    store = solve_real(target, complex_store, MAX_DEGREE)

    print("🚀 Lower bounds for real rational curves in P3")
    print("   d  a  b | averaged | l-^(a-i) l+^i          | min | complex")
    print("---")
    for row in emit_table(store, complex_store, MAX_DEGREE):
        expansion = ",".join(str(value) for value in row.expansion)
        print(
            f"   {row.degree}  {row.lines}  {row.points} | {row.averaged:>8} | "
            f"{expansion:<22} | {row.minimum:>3} | {row.complex_count}"
        )
        if row.minimum and row.minimum == row.complex_count:
            print("      🎯 bound is sharp")


if __name__ == "__main__":
    try:
        main()
    except KeyboardInterrupt:
        print("\n🛑 Stopped by user")
    except Exception as e:
        print(f"❌ Error: {e}")
