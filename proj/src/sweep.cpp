#include "crancap/sweep.hpp"

#include <algorithm>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "crancap/util.hpp"

namespace crancap {

std::vector<SweepRow> gaussian_sweep(int relays, double power, double cmin, double cmax, int steps,
                                     const SolverOptions& opts, int threads) {
  GaussianNetwork probe{relays, power, 0.0};
  probe.validate();
  if (steps < 1) throw std::invalid_argument("need at least one grid point");
  if (!(cmin >= 0.0) || !(cmax >= cmin)) throw std::domain_error("need 0 <= cmin <= cmax");

  RegimeReport report = regimes(relays, power);
  std::vector<SweepRow> rows(static_cast<std::size_t>(steps));
  int want = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
  want = std::clamp(want, 1, 64);
  want = std::min(want, steps);

  auto work = [&](int id) {
    for (int i = id; i < steps; i += want) {
      double c = steps == 1 ? cmin : cmin + (cmax - cmin) * i / (steps - 1);
      GaussianNetwork net{relays, power, c};
      SweepRow& row = rows[static_cast<std::size_t>(i)];
      row.fronthaul_bits = c;
      row.lb = lower_bound(net, opts);
      row.ub = upper_bound(net, opts);
      row.regime = classify(report, c);
    }
  };
  std::vector<std::thread> pool;
  for (int id = 1; id < want; ++id) pool.emplace_back(work, id);
  work(0);
  for (auto& th : pool) th.join();
  return rows;
}

void write_sweep_csv(std::ostream& out, std::span<const SweepRow> rows) {
  out << "C,lb,ub,lb_rho,ub_rho,ub_N,regime\n";
  for (const SweepRow& r : rows) {
    out << fmt12(r.fronthaul_bits) << ',' << fmt12(r.lb.rate_bits) << ',' << fmt12(r.ub.rate_bits)
        << ',' << fmt12(r.lb.rho) << ',' << fmt12(r.ub.rho) << ',' << fmt12(r.ub.noise) << ','
        << regime_name(r.regime) << '\n';
  }
}

}  // namespace crancap
