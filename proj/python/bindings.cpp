/*
 * Copyright 2026 The polarkit Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "polarkit/body.hpp"
#include "polarkit/body_io.hpp"
#include "polarkit/certificates.hpp"
#include "polarkit/covering.hpp"
#include "polarkit/duality_lab.hpp"
#include "polarkit/gamma.hpp"
#include "polarkit/separation.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace polarkit;

namespace {

py::object count_or_none(std::size_t v) { return v == kUnknownCount ? py::object(py::none()) : py::int_(v); }

py::dict report_dict(const VerifyReport& r) {
  py::dict d;
  d["ok"] = r.ok;
  d["kind"] = r.kind;
  d["claim"] = r.claim;
  d["detail"] = r.detail;
  return d;
}

}  // namespace

PYBIND11_MODULE(_polarkit, m) {
  m.doc() = "Certified covering, separation and chaining bounds for symmetric convex bodies";

  auto base = py::register_exception<Error>(m, "PolarkitError", PyExc_RuntimeError);
  py::register_exception<InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);
  py::register_exception<Unsupported>(m, "Unsupported", PyExc_NotImplementedError);
  py::register_exception<BudgetExceeded>(m, "BudgetExceeded", base.ptr());

  py::class_<Tolerances>(m, "Tolerances")
      .def(py::init<>())
      .def_readwrite("abs", &Tolerances::abs)
      .def_readwrite("eta", &Tolerances::eta);

  py::class_<Effort>(m, "Effort")
      .def(py::init<>())
      .def_readwrite("tol", &Effort::tol)
      .def_readwrite("grid_budget", &Effort::grid_budget)
      .def_readwrite("packing_exact_cutoff", &Effort::packing_exact_cutoff)
      .def_readwrite("cover_exact_elements", &Effort::cover_exact_elements)
      .def_readwrite("cover_exact_candidates", &Effort::cover_exact_candidates)
      .def_readwrite("exact_node_budget", &Effort::exact_node_budget)
      .def_readwrite("pair_budget", &Effort::pair_budget)
      .def_readwrite("finest_level", &Effort::finest_level)
      .def_readwrite("refine_restarts", &Effort::refine_restarts)
      .def_readwrite("refine_iterations", &Effort::refine_iterations)
      .def_readwrite("bisect_tol", &Effort::bisect_tol)
      .def_readwrite("max_bisect_steps", &Effort::max_bisect_steps)
      .def_readwrite("restarts", &Effort::restarts)
      .def_readwrite("seed", &Effort::seed)
      .def_readwrite("threads", &Effort::threads);

  py::class_<ConvexBody>(m, "ConvexBody")
      .def_static("hpolytope", &ConvexBody::hpolytope, py::arg("A"), py::arg("b"))
      .def_static("vpolytope", &ConvexBody::vpolytope, py::arg("V"))
      .def_static("symmetric_hull", &ConvexBody::symmetric_hull, py::arg("points"))
      .def_static("ellipsoid", &ConvexBody::ellipsoid, py::arg("Q"))
      .def_static("lp_ball", &ConvexBody::lp_ball, py::arg("p"), py::arg("r"))
      .def_static("linear_image", &ConvexBody::linear_image, py::arg("M"), py::arg("inner"))
      .def_static("euclidean_ball", &ConvexBody::euclidean_ball, py::arg("n"), py::arg("radius") = 1.0)
      .def_static("cube", &ConvexBody::cube, py::arg("n"), py::arg("half_width"))
      .def_static("unit_lp_ball", &ConvexBody::unit_lp_ball, py::arg("n"), py::arg("p"))
      .def_static("builtin", &builtin_body, py::arg("name"), "l1:N, linf:N, ball:N, box:N:H or lp:N:P")
      .def_static("from_json", [](const std::string& s) { return body_from_json(json::parse(s)); })
      .def("to_json", [](const ConvexBody& b) { return body_to_json(b).dump(); })
      .def_property_readonly("dim", &ConvexBody::dim)
      .def_property_readonly("kind", [](const ConvexBody& b) { return std::string(to_string(b.kind())); })
      .def("gauge", &ConvexBody::gauge, py::arg("x"))
      .def("support", &ConvexBody::support, py::arg("y"))
      .def("polar", &ConvexBody::polar)
      .def("scaled", &ConvexBody::scaled, py::arg("s"))
      .def("volume", &ConvexBody::volume)
      .def("__repr__", [](const ConvexBody& b) {
        return "<ConvexBody " + std::string(to_string(b.kind())) + " dim=" + std::to_string(b.dim()) + ">";
      });

  py::class_<CountBracket>(m, "CountBracket")
      .def_readonly("lo", &CountBracket::lo)
      .def_property_readonly("hi", [](const CountBracket& b) { return count_or_none(b.hi); })
      .def_readonly("flags", &CountBracket::flags)
      .def_readonly("volume_lo", &CountBracket::volume_lo)
      .def_property_readonly("centers",
                             [](const CountBracket& b) { return b.hi_certificate ? b.hi_certificate->centers : PointList{}; })
      .def_property_readonly("packing",
                             [](const CountBracket& b) { return b.lo_certificate ? b.lo_certificate->points : PointList{}; })
      .def("__repr__", [](const CountBracket& b) {
        return "<CountBracket [" + std::to_string(b.lo) + ", " +
               (b.hi == kUnknownCount ? std::string("inf") : std::to_string(b.hi)) + "]>";
      });

  py::class_<EntropyBracket>(m, "EntropyBracket")
      .def_readonly("k", &EntropyBracket::k)
      .def_readonly("lo", &EntropyBracket::lo)
      .def_readonly("hi", &EntropyBracket::hi)
      .def_property_readonly("cover_hi", [](const EntropyBracket& b) { return count_or_none(b.cover_hi); })
      .def_readonly("cover_lo", &EntropyBracket::cover_lo)
      .def_readonly("flags", &EntropyBracket::flags);

  m.def("covering_bracket",
        [](const ConvexBody& K, const ConvexBody& T, double rho, bool restricted, const Effort& effort) {
          py::gil_scoped_release release;
          return covering_bracket_at(K, T, rho, restricted, effort);
        },
        py::arg("K"), py::arg("T"), py::arg("rho") = 1.0, py::arg("restricted") = false, py::arg("effort") = Effort{},
        "Certified bracket on N(K, rho T), or N'(K, rho T) when restricted.");
  m.def("entropy_bracket",
        [](const ConvexBody& K, const ConvexBody& T, int k, const Effort& effort) {
          py::gil_scoped_release release;
          return entropy_bracket(K, T, k, effort);
        },
        py::arg("K"), py::arg("T"), py::arg("k"), py::arg("effort") = Effort{});
  m.def("entropy_sequence",
        [](const ConvexBody& K, const ConvexBody& T, int k_max, const Effort& effort) {
          py::gil_scoped_release release;
          return entropy_sequence(K, T, k_max, effort).brackets;
        },
        py::arg("K"), py::arg("T"), py::arg("k_max"), py::arg("effort") = Effort{});
  m.def("covering_certificate",
        [](const ConvexBody& K, const ConvexBody& T, double rho, bool restricted, const CountBracket& b) {
          return covering_certificate_json(K, T, rho, restricted, b).dump();
        },
        py::arg("K"), py::arg("T"), py::arg("rho"), py::arg("restricted"), py::arg("bracket"),
        "Certificate document (JSON text) for a covering bracket.");
  m.def("entropy_certificate",
        [](const ConvexBody& K, const ConvexBody& T, const EntropyBracket& b) {
          return entropy_certificate_json(K, T, b).dump();
        },
        py::arg("K"), py::arg("T"), py::arg("bracket"));

  py::class_<SeparationCertificate>(m, "SeparationCertificate")
      .def_readonly("points", &SeparationCertificate::points)
      .def_readonly("scale", &SeparationCertificate::scale)
      .def("__len__", [](const SeparationCertificate& c) { return c.points.size(); });
  m.def("separation_lower",
        [](const ConvexBody& K, const ConvexBody& T, double scale, const Effort& effort) {
          py::gil_scoped_release release;
          return separation_greedy_lower(K, T, effort, scale);
        },
        py::arg("K"), py::arg("T"), py::arg("scale") = 1.0, py::arg("effort") = Effort{},
        "Greedy certified lower bound on the convex separation number.");
  m.def("verify_separation", [](const ConvexBody& K, const ConvexBody& T,
                                const SeparationCertificate& c) { return verify_separation(K, T, c); });
  m.def("separation_certificate", [](const ConvexBody& K, const ConvexBody& T, const SeparationCertificate& c) {
    return separation_certificate_json(K, T, c).dump();
  });
  m.def("separation_duality",
        [](const ConvexBody& K, const ConvexBody& T, const Effort& effort) {
          SeparationDualityRow r;
          {
            py::gil_scoped_release release;
            r = separation_duality_check(K, T, effort);
          }
          py::dict d;
          d["lower"] = r.lower;
          d["dual_cover"] = count_or_none(r.dual_cover);
          d["rhs"] = r.rhs;
          d["holds"] = r.holds;
          return d;
        },
        py::arg("K"), py::arg("T"), py::arg("effort") = Effort{});

  m.def("verify_certificate",
        [](const std::string& text) {
          json doc;
          try {
            doc = json::parse(text);
          } catch (const json::exception& e) {
            return report_dict({false, "", "", std::string("not valid JSON: ") + e.what()});
          }
          return report_dict(verify_certificate(doc));
        },
        py::arg("document"), "Re-check a certificate document; returns ok, kind, claim and detail.");

  m.def("dudley_constant", &dudley_constant, py::arg("p"));
  m.def("dyadic_step_holds", [](double p, int j) { return dyadic_step_check(p, j).holds; }, py::arg("p"), py::arg("j"));
  m.def("gaussian_sup_mc",
        [](const ConvexBody& K, const Mat& Q, std::size_t samples, std::uint64_t seed, int threads) {
          MonteCarloResult r;
          {
            py::gil_scoped_release release;
            r = gaussian_sup_mc(K, Q, samples, seed, threads);
          }
          return py::make_tuple(r.mean, r.std_error);
        },
        py::arg("K"), py::arg("Q"), py::arg("samples") = 100000, py::arg("seed") = 0, py::arg("threads") = 1,
        "Monte Carlo estimate of E sup_{x in K} <x, G>, G ~ N(0, Q); returns (mean, standard error).");

  py::class_<FiniteMetricSpace>(m, "FiniteMetricSpace")
      .def(py::init<Mat, std::vector<std::string>, double>(), py::arg("D"), py::arg("labels") = std::vector<std::string>{},
           py::arg("tol") = 1e-9)
      .def_static("random_euclidean", &FiniteMetricSpace::random_euclidean, py::arg("size"), py::arg("dim"),
                  py::arg("seed"))
      .def_property_readonly("size", &FiniteMetricSpace::size)
      .def_property_readonly("distances", &FiniteMetricSpace::distances);
  m.def("finite_entropy_numbers", &finite_entropy_numbers, py::arg("space"));
  m.def("gamma_exact",
        [](const FiniteMetricSpace& s, double p, const std::string& convention) {
          return gamma_exact_finite(s, p, parse_convention(convention)).value;
        },
        py::arg("space"), py::arg("p"), py::arg("convention") = "standard");
  m.def("gamma_estimates",
        [](const FiniteMetricSpace& s, double p, const std::string& convention) {
          const auto g = gamma_estimates_finite(s, p, parse_convention(convention));
          py::dict d;
          d["sudakov_lo"] = g.sudakov_lo;
          d["dudley_hi"] = g.dudley_hi;
          d["chaining_hi"] = g.chaining_hi;
          d["exact"] = g.exact ? py::object(py::float_(*g.exact)) : py::object(py::none());
          return d;
        },
        py::arg("space"), py::arg("p"), py::arg("convention") = "standard");

  py::class_<BodyPair>(m, "BodyPair")
      .def(py::init([](std::string id, std::string family, ConvexBody K, ConvexBody T) {
             return BodyPair{std::move(id), std::move(family), std::move(K), std::move(T)};
           }),
           py::arg("id"), py::arg("family"), py::arg("K"), py::arg("T"))
      .def_readonly("id", &BodyPair::id)
      .def_readonly("family", &BodyPair::family)
      .def_readonly("K", &BodyPair::K)
      .def_readonly("T", &BodyPair::T);
  m.def("family_ids", &family_ids);
  m.def("generate_family",
        [](const std::string& family, int n, int count, std::uint64_t seed) {
          ExperimentSpec s;
          s.family = family;
          s.n = n;
          s.count = count;
          s.seed = seed;
          return generate_family(s);
        },
        py::arg("family") = "all", py::arg("n") = 2, py::arg("count") = 3, py::arg("seed") = 0);

  py::class_<DualityRow>(m, "DualityRow")
      .def_readonly("pair_id", &DualityRow::pair_id)
      .def_readonly("family", &DualityRow::family)
      .def_readonly("n", &DualityRow::n)
      .def_readonly("a", &DualityRow::a)
      .def_readonly("flags", &DualityRow::flags)
      .def_property_readonly("n_kt", [](const DualityRow& r) { return py::make_tuple(r.n_kt.lo, count_or_none(r.n_kt.hi)); })
      .def_property_readonly("n_dual",
                             [](const DualityRow& r) { return py::make_tuple(r.n_dual.lo, count_or_none(r.n_dual.hi)); })
      .def_property_readonly("ratio", [](const DualityRow& r) { return py::make_tuple(r.ratio.lo, r.ratio.hi); });
  m.def("duality_scan",
        [](const std::vector<BodyPair>& pairs, const std::vector<double>& a_grid, const Effort& effort) {
          py::gil_scoped_release release;
          return duality_scan(pairs, a_grid, effort);
        },
        py::arg("pairs"), py::arg("a_grid") = std::vector<double>{0.5, 1.0, 2.0, 4.0, 8.0}, py::arg("effort") = Effort{});
  m.def("duality_csv", &duality_csv, py::arg("rows"));
  m.def("fit_constants_json", [](const std::vector<DualityRow>& rows) { return fit_json(fit_constants(rows)); },
        py::arg("rows"));
}
