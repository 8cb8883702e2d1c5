"""Count how often plain eps_n leaves an NCCW profile, against the
endpoint-rounded cut-down, which never should."""
import argparse
import random

from cuntzkit.basis import NccwProfile, StabilityViolation, Supernatural, nccw_epsilon, random_profile_member


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--members", type=int, default=200)
    ap.add_argument("--seed", type=int, default=0)
    a = ap.parse_args()
    rng = random.Random(a.seed)
    for primes in ((2,), (3,)):
        q = Supernatural.of(*primes)
        for r, l in ((2, 1), (3, 1), (2, 2)):
            p = NccwProfile(r, l)
            fs = [random_profile_member(p, rng) for _ in range(a.members)]
            for n in range(4):
                raw = rounded = 0
                for f in fs:
                    try:
                        nccw_epsilon(f, p, q, n, raw=True)
                    except StabilityViolation:
                        raw += 1
                    try:
                        nccw_epsilon(f, p, q, n)
                    except StabilityViolation:
                        rounded += 1
                print(f"q={q} profile=({r},{l}) n={n}: plain eps_n leaves profile {raw}/{a.members}, "
                      f"rounded {rounded}/{a.members}")


if __name__ == "__main__":
    main()
