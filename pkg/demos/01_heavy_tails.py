"""How heavy are the tails?

Compare the t-location-scale density against the normal density as the
shape parameter nu grows. Small nu puts visible mass far from the center.
"""
import math

import numpy as np

from swdknn import TlsParams, tls_log_pdf, tls_pdf

x = np.array([0.0, 1.0, 3.0, 10.0, 100.0])
normal = np.exp(-x ** 2 / 2) / math.sqrt(2 * math.pi)

print("x        " + "  ".join(f"{v:>10g}" for v in x))
for nu in (0.5, 1, 4, 30, 1e6):
    print(f"nu={nu:<6g}" + "  ".join(f"{v:10.3e}" for v in tls_pdf(x, TlsParams(0, 1, nu))))
print("normal   " + "  ".join(f"{v:10.3e}" for v in normal))

# nu = 1 is the Cauchy density
print("\npdf(0 | 0, 1, 1) =", tls_pdf(0.0, TlsParams(0, 1, 1)), " 1/pi =", 1 / math.pi)

# far out, the density underflows but its logarithm stays finite
print("log pdf(1e150 | 0, 1, 3) =", tls_log_pdf(1e150, TlsParams(0, 1, 3)))
