"""Basis ranks and middle-codimension intersection pairings of small blowups."""
from chowcalc.cellular import BLOWUP_EXAMPLES, blowup_example
from chowcalc.spaces import basis, integrate, intersection_matrix, pushforward


def main():
    for example in BLOWUP_EXAMPLES:
        bl = blowup_example(example)
        dim = bl.dim
        print(f"{example}: dim {dim}, ranks {bl.basis_ranks()}")
        for k in range(1, dim // 2 + 1):
            labels = [str(c) for c in basis(bl, k)]
            print(f"  codim {k} basis {labels}")
            print(f"  pairing with codim {dim - k}: {intersection_matrix(bl, k)}")
        e = pushforward(bl.exceptional_inclusion(), bl.exceptional.cls(1))
        print(f"  integral of e^{dim}: {integrate(e ** dim)}")
        print()


if __name__ == "__main__":
    main()
