"""Flat character sums over fundamental discriminants: square n against the
density main term, non-square n against the sqrt(z) n^(1/4) log n scale."""

import argparse

from quadmoments import charsum


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--z-max-exp", type=int, default=6)
    args = ap.parse_args()

    zs = [10**e for e in range(3, args.z_max_exp + 1)]
    density = charsum.calibrate_flat_density(zs)
    print(f"# calibrated density {density:.6f}")
    print("n,z,exact,main_term,rel_dev,bound_ratio")
    for n in (1, 2, 3, 4, 5, 6, 9, 10, 36):
        for z in zs:
            r = charsum.flat_char_sum(n, z, density)
            if r.main_term is not None:
                dev = abs(r.exact_sum - r.main_term) / r.main_term
                print(f"{n},{z},{r.exact_sum},{r.main_term:.1f},{dev:.2e},")
            else:
                print(f"{n},{z},{r.exact_sum},,,{r.bound_ratio:.4f}")


if __name__ == "__main__":
    main()
