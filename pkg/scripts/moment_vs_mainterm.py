"""Compare S_k(X, Y) / X with T_k(Y) as X grows, for both exact routes."""

import argparse

from quadmoments import charsum, numthy, squaremult
from quadmoments.charsum import MomentParams


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--k", type=int, default=1)
    ap.add_argument("--y", type=int, default=10)
    ap.add_argument("--x-max-exp", type=int, default=6)
    ap.add_argument("--threads", type=int, default=4)
    args = ap.parse_args()

    T = squaremult.main_term_sum(args.k, args.y, numthy.build_spf_sieve(max(args.y, 2))).value
    print(f"# T_{args.k}({args.y}) = {T!r}")
    print("X,S_direct,S_decomposed,ratio,seconds_direct,seconds_decomposed")
    for e in range(3, args.x_max_exp + 1):
        p = MomentParams(args.k, 10**e, args.y)
        a = charsum.moment_direct(p, args.threads)
        b = charsum.moment_decomposed(p, args.threads)
        assert a.value == b.value
        print(f"{10**e},{a.value},{b.value},{a.value / 10**e / T:.5f},{a.wall_seconds:.2f},{b.wall_seconds:.2f}")


if __name__ == "__main__":
    main()
