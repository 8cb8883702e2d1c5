"""Run the uniform-basis axiom checker over every (q, space) configuration."""
import argparse
import json
import random
import time

from cuntzkit.basis import Supernatural, verify_axioms
from cuntzkit.lsc import random_step, space_by_name


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--samples", type=int, default=20)
    ap.add_argument("--n-max", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    a = ap.parse_args()
    rng = random.Random(a.seed)
    rows = []
    for primes in ((2,), (3,), (2, 3)):
        q = Supernatural.of(*primes)
        for name in ("open", "closed", "circle", "theta"):
            space = space_by_name(name)
            samples = [random_step(space, rng) for _ in range(a.samples)]
            t0 = time.time()
            rep = verify_axioms(q, space, samples, a.n_max)
            rows.append({"q": str(q), "space": name, "passed": rep.passed, "seconds": round(time.time() - t0, 1),
                         "checks": rep.summary()})
            print(f"{str(q):10s} {name:7s} passed={rep.passed} {rows[-1]['seconds']}s")
    print(json.dumps(rows, indent=1))


if __name__ == "__main__":
    main()
