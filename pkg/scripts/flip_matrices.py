"""Print the matrix of Phi_* on powers of zeta for standard flips of type (n, m).

Entry (i, k) is the coefficient of zeta'^i in Phi_*(zeta^k), a class on the base S.
"""
import argparse

from chowcalc.correspondences import FlipSetting, phi_lower_matrix


def show(n: int, m: int) -> None:
    mat = phi_lower_matrix(FlipSetting(n, m, n + m))
    cells = [[str(c) for c in row] for row in mat]
    width = max(len(c) for row in cells for c in row)
    print(f"(n, m) = ({n}, {m})")
    print("        " + " ".join(f"{'z^' + str(k):>{width}}" for k in range(n + 1)))
    for i, row in enumerate(cells):
        print(f"  z'^{i}  " + " ".join(f"{c:>{width}}" for c in row))
    print()


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--max-n", type=int, default=3)
    args = parser.parse_args()
    for n in range(args.max_n + 1):
        for m in range(n + 1):
            show(n, m)


if __name__ == "__main__":
    main()
