"""Tabulate T_k(Y) on a doubling grid and the ratio T_k(Y) / (Y^k (log Y)^(2k^2-k))."""

import argparse
import math

from quadmoments import fit, numthy, squaremult


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--k", type=int, default=2)
    ap.add_argument("--y-max", type=int, default=512)
    ap.add_argument("--threads", type=int, default=4)
    args = ap.parse_args()

    d = fit.exponent_constants(args.k).expected_degree
    sieve = numthy.build_spf_sieve(args.y_max)
    print("k,Y,T_k,tuples,normalised,seconds")
    Y = 4
    while Y <= args.y_max:
        r = squaremult.main_term_sum(args.k, Y, sieve, args.threads)
        norm = r.value / (Y**args.k * math.log(Y) ** d)
        print(f"{args.k},{Y},{r.value!r},{r.tuple_count},{norm:.6g},{r.seconds:.3f}")
        Y *= 2


if __name__ == "__main__":
    main()
