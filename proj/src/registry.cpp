// Built-in models. Each entry is ordinary model-file text, read by the same
// loader as user files.

#include <algorithm>
#include <utility>

#include "hamreal/models.hpp"

namespace hamreal {

namespace {

constexpr std::string_view kHarmonic = R"(
[model]
name = harmonic
dim = 2
vars = x, y

[dynamics]
x = y
y = -x

[structure]
multiplier = 1
H = (x^2 + y^2)/2

[canonical]
vars = q, p
q = x
p = y
H = (q^2 + p^2)/2
)";

constexpr std::string_view kHostParasite = R"(
[model]
name = host_parasite
dim = 2
vars = x, y
params = a=1, b=1, c=1, delta=1

[domain]
t = 0, 1

[dynamics]
x = a*x - b*y*x
y = c*y - delta*y^2/x

[structure]
multiplier = exp(c*t)/(x*y^2)
psi = a*x
phi = c*y
H = (-b*ln(y) - delta/x)*exp(c*t)

[canonical]
vars = q, p
q = a*t - ln(x)
p = exp(c*t)/y
H = -exp(c*t)*(b*(c*t - ln(p)) + delta*exp(q - a*t))

# Reduced system (c = 0) as a Hamiltonian field of omega, plus factor*Z.
[conformal]
omega = 1/(x*y^2)
theta_x = -1/(x*y)
theta_y = 0
liouville_x = 0
liouville_y = -y
factor = -c
H = -a/y - b*ln(y) - delta/x

[errata]
note = The text assigns phi = a*x and psi = c*y; the exactness condition and the canonical-coordinate relation need psi = a*x (subtracted from the x-equation) and phi = c*y. Stored that way.
note = With X = ((1/M) H_y, -(1/M) H_x) the form satisfying i_X Omega = dH is M dx^dy; the printed (1/M) dx^dy and Omega = x*y^2 dx^dy are the Poisson coefficient, not the symplectic one.
note = The printed potential theta = (1/3) y^3 x dx with Z = y d/dy does not satisfy i_Z Omega = -theta (off by a factor of 3). For Omega = dx^dy/(x*y^2) the consistent block is theta = -dx/(x*y), Z = -y d/dy; then X_H + (-c) Z is the full host-parasite field and L Omega = -c Omega.
)";

constexpr std::string_view kHostParasiteReduced = R"(
[model]
name = host_parasite_reduced
dim = 2
vars = x, y
params = a=1, b=1, delta=1

[dynamics]
x = a*x - b*y*x
y = -delta*y^2/x

[structure]
multiplier = 1/(x*y^2)
H = -a/y - b*ln(y) - delta/x
)";

constexpr std::string_view kGompertz = R"(
[model]
name = gompertz
dim = 2
vars = x, y
params = a=1, b=1, c=1, delta=1, kappa=1, nu=1

[domain]
t = 0, 1

[dynamics]
x = x*(a*ln(x/kappa) + b*y)
y = y*(delta*x + c*ln(y/nu))

[structure]
multiplier = exp(-(a + c)*t)/(x*y)
printed_multiplier = exp(-(a + c)*t)
psi = a*x*ln(x/kappa)
phi = c*y*ln(y/nu)
H = exp(-(a + c)*t)*(b*y - delta*x)

[canonical]
vars = q, p
q = exp(-a*t)*ln(x/kappa)
p = exp(-c*t)*ln(y/nu)

[errata]
note = The tabulated integrating factor exp(-(a+c)t) fails dM/dt + M div X = 0; exp(-(a+c)t)/(x*y) satisfies it and is what dq^dp of the tabulated canonical coordinates requires.
note = Auxiliary functions derived from dq^dp = M (dx - psi dt)^(dy - phi dt): psi = a x ln(x/kappa), phi = c y ln(y/nu).
)";

constexpr std::string_view kMutualistic = R"(
[model]
name = mutualistic
dim = 2
vars = x, y
params = a=1, b=1, c=2, d=1, lambda=1, nu=1

# Exponents and constants solving the exactness condition.
[define]
beta = (c*d + 2*a*d - b*c)/(b*c - a*d)
gamma = (2*a*d + a*b - b*c)/(b*c - a*d)
alpha = -(lambda*(beta + 1) + nu*(gamma + 1))
k = a/(gamma + 1)
kp = b/(gamma + 2)

[domain]
t = 0, 1

[dynamics]
x = x*(lambda - a*x + b*y)
y = y*(nu + c*x - d*y)

[structure]
multiplier = exp(alpha*t)*x^beta*y^gamma
psi = lambda*x
phi = nu*y
H = -k*exp(alpha*t)*x^(beta + 2)*y^(gamma + 1) + kp*exp(alpha*t)*y^(gamma + 2)*x^(beta + 1)

[canonical]
vars = q, p
q = x^(beta + 1)*exp(-lambda*(beta + 1)*t)/(beta + 1)
p = y^(gamma + 1)*exp(-nu*(gamma + 1)*t)/(gamma + 1)

[errata]
note = The table leaves the exponents and constants open. Exactness with psi = lambda x, phi = nu y forces k (gamma+1) = a, k (beta+2) = c, k' (gamma+2) = b, k' (beta+1) = d, hence beta = (cd + 2ad - bc)/(bc - ad), gamma = (2ad + ab - bc)/(bc - ad) and alpha = -(lambda (beta+1) + nu (gamma+1)).
note = The solution is singular when bc = ad, which includes all parameters equal to 1; the default c = 2 gives beta = 2, gamma = 1, k = 1/2, k' = 1/3.
)";

constexpr std::string_view kKochMeinhardt = R"(
[model]
name = koch_meinhardt
dim = 2
vars = x, y

[domain]
t = 0, 1

[dynamics]
x = -x + x^2/y
y = -y + x^2

[structure]
multiplier = 1/x^2
psi = -x
phi = -y
H = ln(y) - x

[canonical]
vars = q, p
q = t + ln(sqrt(x*y)) - y/x
p = t + ln(sqrt(x*y))

[errata]
note = Auxiliary functions psi = -x, phi = -y derived from the tabulated M, H and canonical coordinates; the tabulated data then pass as printed.
)";

constexpr std::string_view kKermackMcKendrick = R"(
[model]
name = kermack_mckendrick
dim = 2
vars = x, y
params = beta=1, nu=1, gamma=1

[domain]
t = 0, 1

[dynamics]
x = -beta*x*y - nu*x
y = beta*x*y - (nu + gamma)*y

[structure]
multiplier = 1/(x*y)
psi = -nu*x
phi = -(nu + gamma)*y
H = -beta*(x + y)

[canonical]
vars = q, p
q = ln(x) + nu*t
p = ln(y) + (gamma + nu)*t

[errata]
note = Auxiliary functions psi = -nu x, phi = -(nu+gamma) y derived from M and H.
note = The tabulated q = ln y - nu t makes dq^dp degenerate (both coordinates depend on y alone); q = ln x + nu t is the coordinate matching M (dx - psi dt)^(dy - phi dt).
)";

constexpr std::string_view kLu = R"(
[model]
name = lu
dim = 3
vars = x, y, z
params = alpha=36, beta=3, gamma=20

# e^(19 t) at the chaotic defaults; a short time window keeps residuals near unit scale.
[domain]
t = 0, 0.1

[dynamics]
x = alpha*(y - x)
y = gamma*y - x*z
z = x*y - beta*z

[structure]
multiplier = exp((alpha + beta - gamma)*t)
psi = -alpha*x
phi = gamma*y
varphi = -beta*z
H1 = x^2/2 - alpha*z
H2 = (y^2 + z^2)/2*exp((alpha + beta - gamma)*t)

[standard]
vars = u, v, w
u = x*exp(alpha*t)
v = y*exp(-gamma*t)
w = z*exp(beta*t)
H1 = u^2/2*exp(-2*alpha*t) - alpha*w*exp(-beta*t)
H2 = v^2/2*exp((alpha + beta + gamma)*t) + w^2/2*exp((alpha - beta - gamma)*t)
flow_u = alpha*v*exp((alpha + gamma)*t)
flow_v = -u*w*exp(-(alpha + beta + gamma)*t)
flow_w = u*v*exp((-alpha + beta + gamma)*t)

[conformal]
params = -alpha, gamma, -beta
F1 = x^2/2 - alpha*z
F2 = (y^2 + z^2)/2

[errata]
note = The exponent of the second Hamiltonian is printed as e^(alpha+beta-gamma t); it is read as e^((alpha+beta-gamma) t), matching the multiplier and the standard-coordinate pair.
note = The decomposition of mu_H uses {H1,H2}_{w,u} for dv and {H1,H2}_{u,v} for dw, consistent with the Nambu-Hamiltonian field; the printed one-forms repeat {H1,H2}_{u,w}.
)";

constexpr std::string_view kQi = R"(
[model]
name = qi
dim = 3
vars = x, y, z
params = beta=1, gamma=1

[domain]
t = 0, 1

[dynamics]
x = y - x + y*z
y = gamma*x - x*z - y
z = x*y - beta*z

[structure]
multiplier = exp((2 + beta)*t)
printed_multiplier = exp(beta*t)
psi = -x
phi = -y
varphi = -beta*z
H1 = (gamma*x^2 - y^2 - (gamma + 1)*z^2)*exp((2 + beta)*t)
H2 = (x^2 + y^2)/(4*(gamma + 1)) - z/2

[standard]
vars = u, v, w
u = x*exp(t)
v = y*exp(t)
w = z*exp(beta*t)
H1 = (gamma*u^2 - v^2)*exp(beta*t) - (gamma + 1)*w^2*exp((2 - beta)*t)
H2 = (u^2 + v^2)*exp(-2*t)/(4*(gamma + 1)) - w*exp(-beta*t)/2
flow_u = v + v*w*exp(-beta*t)
flow_v = gamma*u - u*w*exp(-beta*t)
flow_w = u*v*exp((beta - 2)*t)

[conformal]
params = -1, -1, -beta
F1 = gamma*x^2 - y^2 - (gamma + 1)*z^2
F2 = (x^2 + y^2)/(4*(gamma + 1)) - z/2

[errata]
note = The printed multiplier exp(beta t) fails dM/dt + M div X = 0: div X = -(2+beta), leaving a residual of -2M. The standard coordinates u = x e^t, v = y e^t, w = z e^(beta t) require M = exp((2+beta) t), which is stored; the first Hamiltonian is rescaled to match.
note = The printed standard-coordinate H1 = (gamma u^2 - v^2) e^((beta-2)t) - (gamma+1) w^2 e^(-beta t) is the stored one times e^(-2t), and generates the stated standard flow only up to that factor.
note = The conformal parameter sentence names (-alpha, gamma, -beta); the parameters actually used are (-1, -1, -beta).
note = The defining identities are paired with i_X dt = 1; here i_X eta = 0 for the Nambu field and i_E eta = 1 for the evolution field.
)";

const std::vector<std::pair<std::string_view, std::string_view>>& sources() {
  static const std::vector<std::pair<std::string_view, std::string_view>> s{
      {"gompertz", kGompertz},
      {"harmonic", kHarmonic},
      {"host_parasite", kHostParasite},
      {"host_parasite_reduced", kHostParasiteReduced},
      {"kermack_mckendrick", kKermackMcKendrick},
      {"koch_meinhardt", kKochMeinhardt},
      {"lu", kLu},
      {"mutualistic", kMutualistic},
      {"qi", kQi},
  };
  return s;
}

const std::vector<std::pair<std::string, ModelSpec>>& registry() {
  static const std::vector<std::pair<std::string, ModelSpec>> r = [] {
    std::vector<std::pair<std::string, ModelSpec>> out;
    for (const auto& [name, text] : sources()) out.emplace_back(std::string(name), parse_model(text));
    return out;
  }();
  return r;
}

}  // namespace

const ModelSpec& get_model(std::string_view name) {
  for (const auto& [n, spec] : registry())
    if (n == name) return spec;
  std::string msg = "unknown model '" + std::string(name) + "'; available:";
  for (const auto& n : list_models()) msg += " " + n;
  throw ModelError(msg);
}

std::vector<std::string> list_models() {
  std::vector<std::string> out;
  for (const auto& [n, text] : sources()) out.emplace_back(n);
  std::sort(out.begin(), out.end());
  return out;
}

std::string_view registry_source(std::string_view name) {
  for (const auto& [n, text] : sources())
    if (n == name) return text;
  throw ModelError("unknown model '" + std::string(name) + "'");
}

}  // namespace hamreal
