#pragma once

namespace nlcavity::numerics {

/// Jacobi elliptic dn(u|m) for parameter m in [0, 1].
[[nodiscard]] double jacobi_dn(double u, double m);

/// Upper incomplete gamma function Γ(s, x).
[[nodiscard]] double upper_incomplete_gamma(double s, double x);

/// ln(e^x Γ(s, x)), finite where Γ(s, x) itself under- or overflows.
[[nodiscard]] double log_scaled_upper_gamma(double s, double x);

}  // namespace nlcavity::numerics
