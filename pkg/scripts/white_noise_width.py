"""Distribution of the extrapolated and sampled spectrum widths for Gaussian white noise."""
import argparse

import numpy as np

from qtriplet.errors import FitError
from qtriplet.mfdfa import fluctuation_surface, generalized_hurst, legendre_spectrum, spectrum_extrema
from qtriplet.synth import SeedSpec, gen_gaussian


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seeds", type=int, default=20)
    ap.add_argument("--log2n", type=int, nargs="+", default=[14, 16, 18])
    args = ap.parse_args()
    for k in args.log2n:
        ext, samp, h2 = [], [], []
        for s in range(args.seeds):
            hc = generalized_hurst(fluctuation_surface(gen_gaussian(SeedSpec(s, 2 ** k))))
            h2.append(hc.h[hc.moments == 2][0])
            sp = legendre_spectrum(hc)
            samp.append(np.ptp(sp.alphas))
            try:
                ext.append(spectrum_extrema(sp).width)
            except FitError:
                ext.append(np.nan)
        ext = np.array(ext)
        print(f"n=2^{k}: h(2) {np.mean(h2):.3f}+/-{np.std(h2):.3f}; sampled width median {np.median(samp):.3f} "
              f"max {np.max(samp):.3f}; extrapolated width median {np.nanmedian(ext):.3f} "
              f"max {np.nanmax(ext):.3f}, share <= 0.15: {np.mean(ext <= 0.15):.2f}")


if __name__ == "__main__":
    main()
