"""Signs of the Cayley composition and of virtual flips, r = 1..6."""
from chowcalc.checks import cayley_gamma_check, virtual_flip_check


def main():
    print(" r  cayley  (-1)^(r-1)  (-1)^r   virtual(i=0)")
    for r in range(1, 7):
        cayley = cayley_gamma_check(r).sign if r >= 2 else None
        virtual = virtual_flip_check(r, 0).sign if r <= 4 else None
        fmt = lambda s: "  -" if s is None else f"{s:+3d}"
        print(f"{r:2}  {fmt(cayley):>6}  {(-1) ** (r - 1):+10d}  {(-1) ** r:+6d}   {fmt(virtual):>12}")


if __name__ == "__main__":
    main()
