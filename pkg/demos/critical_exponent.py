"""When is |X_t - x|^gamma a submartingale?

Prints the critical exponent for a few jump asymmetries and the signs of the
two drift weights on a coarse gamma grid.
"""

import numpy as np

from stablefrac import StableParams, classify, critical_beta, power_constants


def main() -> None:
    alpha = 1.5
    print(f"alpha = {alpha}")
    for c_minus in (1.0, 0.5, 0.2, 0.05):
        p = StableParams(alpha, c_minus, 1.0)
        beta = critical_beta(p).beta_crit
        print(f"\nc- = {c_minus:4.2f}, c+ = 1   critical exponent {beta:.6f}")
        for g in np.linspace(alpha - 1 + 0.05, alpha - 0.05, 7):
            pc = power_constants(p, g)
            print(
                f"  gamma {g:5.3f}  k- {pc.k_minus:+9.4f}  k+ {pc.k_plus:+9.4f}  {classify(p, g).name}"
            )


if __name__ == "__main__":
    main()
