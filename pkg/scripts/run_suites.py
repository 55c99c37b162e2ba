"""Run verification suites and print a timing table.

    python3 scripts/run_suites.py                 # every suite, default sweeps
    python3 scripts/run_suites.py cayley_gamma flip_identity
"""
import argparse
import time

from chowcalc.suites import SUITES, get_suite


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("suites", nargs="*", default=list(SUITES))
    args = parser.parse_args()

    failed = 0
    grand = time.perf_counter()
    for name in args.suites:
        start = time.perf_counter()
        items = get_suite(name).run()
        bad = [i for i in items if i.status != "pass"]
        failed += len(bad)
        print(f"{name:28} {len(items) - len(bad):3}/{len(items):<3} {time.perf_counter() - start:7.2f}s")
        for item in bad:
            print(f"    {item.text()}")
    print(f"{'total':28} {'':7} {time.perf_counter() - grand:7.2f}s")
    raise SystemExit(1 if failed else 0)


if __name__ == "__main__":
    main()
