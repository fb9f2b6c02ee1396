#pragma once

namespace huberband {

double normal_pdf(double x);
double normal_log_pdf(double x);
double Phi(double x);
// 1 - Phi(x) without cancellation.
double Phi_upper(double x);
// Inverse of Phi on (0, 1).
double Phi_inv(double p);
// Phi_inv(1 - q) evaluated from q directly, accurate for tiny q.
double Phi_inv_upper(double q);

}  // namespace huberband
