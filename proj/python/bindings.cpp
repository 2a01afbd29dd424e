#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cmath>
#include <cstdio>
#include <optional>
#include <string>
#include <tuple>
#include <variant>

#include "negmnom/distribution.hpp"
#include "negmnom/divisibility.hpp"
#include "negmnom/domain.hpp"
#include "negmnom/model_io.hpp"
#include "negmnom/series.hpp"

namespace py = pybind11;
using namespace negmnom;

namespace {

using Key = std::variant<std::string, std::vector<int>>;

SubsetId to_subset(const Key& key, int n) {
  if (const auto* s = std::get_if<std::string>(&key)) return parse_subset_key(*s, n);
  std::string text;
  for (int i : std::get<std::vector<int>>(key)) {
    if (!text.empty()) text += ',';
    text += std::to_string(i);
  }
  return parse_subset_key(text, n);
}

py::tuple from_subset(SubsetId t) {
  py::list out;
  for (int pos = 0; pos < 32; ++pos)
    if (t.contains(pos)) out.append(pos + 1);
  return py::tuple(out);
}

py::tuple alpha_tuple(std::span<const std::uint16_t> alpha) {
  py::tuple out(alpha.size());
  for (std::size_t i = 0; i < alpha.size(); ++i) out[i] = alpha[i];
  return out;
}

// Ordered dict keyed by exponent tuples, in graded lexicographic order.
py::dict series_dict(const TruncatedSeries& s) {
  py::dict out;
  for (std::size_t i = 0; i < s.size(); ++i) out[alpha_tuple(s.basis().exponents(i))] = s[i];
  return out;
}

AffineModel make_model(int n, const std::map<Key, double>& terms) {
  std::map<SubsetId, double> coeffs;
  for (const auto& [k, v] : terms) {
    const SubsetId t = to_subset(k, n);
    if (coeffs.count(t)) throw InvalidArgument("duplicate subset " + t.to_string());
    coeffs[t] = v;
  }
  return AffineModel(n, std::move(coeffs));
}

GridRange to_range(const std::variant<std::string, std::tuple<double, double, double>>& r) {
  if (const auto* s = std::get_if<std::string>(&r)) return GridRange::parse(*s);
  const auto& [lo, hi, step] = std::get<1>(r);
  char buf[128];
  std::snprintf(buf, sizeof buf, "%.17g:%.17g:%.17g", lo, hi, step);
  return GridRange::parse(buf);
}

}  // namespace

PYBIND11_MODULE(_negmnom, m) {
  m.doc() = "Infinitely divisible negative multinomial distributions";

  static py::exception<Error> error(m, "Error", PyExc_RuntimeError);
  static py::exception<InvalidArgument> invalid(m, "InvalidArgument", error.ptr());
  static py::exception<DimensionMismatch> dim(m, "DimensionMismatch", invalid.ptr());
  static py::exception<ModelFormatError> format(m, "ModelFormatError", error.ptr());
  static py::exception<GuardExceeded> guard(m, "GuardExceeded", error.ptr());
  static py::exception<NoPositiveRoot> noroot(m, "NoPositiveRoot", error.ptr());
  static py::exception<DegenerateModel> degenerate(m, "DegenerateModel", error.ptr());
  static py::exception<DomainRejected> rejected(m, "DomainRejected", error.ptr());
  static py::exception<ExcessTailMass> tail(m, "ExcessTailMass", error.ptr());
  py::register_exception_translator([](std::exception_ptr p) {
    const auto raise = [](const py::object& type, const char* what) {
      PyErr_SetObject(type.ptr(), type(what).ptr());
    };
    try {
      if (p) std::rethrow_exception(p);
    } catch (const DomainRejected& e) {
      py::object obj = py::reinterpret_borrow<py::object>(rejected)(e.what());
      obj.attr("margin") = e.margin();
      PyErr_SetObject(rejected.ptr(), obj.ptr());
    } catch (const ExcessTailMass& e) {
      py::object obj = py::reinterpret_borrow<py::object>(tail)(e.what());
      obj.attr("tail_mass") = e.tail();
      PyErr_SetObject(tail.ptr(), obj.ptr());
    } catch (const DimensionMismatch& e) {
      raise(dim, e.what());
    } catch (const InvalidArgument& e) {
      raise(invalid, e.what());
    } catch (const ModelFormatError& e) {
      raise(format, e.what());
    } catch (const GuardExceeded& e) {
      raise(guard, e.what());
    } catch (const NoPositiveRoot& e) {
      raise(noroot, e.what());
    } catch (const DegenerateModel& e) {
      raise(degenerate, e.what());
    } catch (const Error& e) {
      raise(error, e.what());
    }
  });

  py::class_<AffineModel>(m, "AffineModel")
      .def(py::init(&make_model), py::arg("n"), py::arg("terms"),
           "A = 1 - P with P = sum a_T z^T; keys are tuples of 1-based indices or '1,2' strings.")
      .def_static("from_json", &parse_model_json, py::arg("text"))
      .def_static("load", [](const std::string& path) { return load_model(path); }, py::arg("path"))
      .def("to_json", &model_to_json)
      .def_property_readonly("n", &AffineModel::dimension)
      .def_property_readonly("terms",
                             [](const AffineModel& self) {
                               py::dict out;
                               for (const auto& [t, c] : self.terms()) out[from_subset(t)] = c;
                               return out;
                             })
      .def("coeff", [](const AffineModel& self, const Key& k) { return self.coeff(to_subset(k, self.dimension())); })
      .def("evaluate", [](const AffineModel& self, const std::vector<double>& z) { return evaluate(self, z); })
      .def("__repr__", [](const AffineModel& self) { return "AffineModel(" + model_to_json(self) + ")"; });

  m.def("compute_bt", [](const AffineModel& model, const Key& t) {
    return compute_bt(model, to_subset(t, model.dimension()));
  }, py::arg("model"), py::arg("subset"));
  m.def("bt_table", [](const AffineModel& model) {
    const BTable table = bt_table(model);
    py::dict out;
    for (std::uint32_t bits = 1; bits < (1u << model.dimension()); ++bits)
      out[from_subset(SubsetId(bits))] = table[SubsetId(bits)];
    return out;
  }, py::arg("model"));
  m.def("is_infinitely_divisible", [](const AffineModel& model, double tol) {
    const auto v = is_infinitely_divisible(model, tol);
    py::dict out;
    out["accepted"] = v.accepted;
    out["witness"] = v.accepted ? py::object(py::none()) : py::object(from_subset(v.witness));
    out["witness_value"] = v.accepted ? py::object(py::none()) : py::object(py::float_(v.witness_value));
    return out;
  }, py::arg("model"), py::arg("tol") = 0.0);

  m.def("expand", [](const AffineModel& model, double lambda, int degree) {
    return series_dict(expand_neg_power(model, lambda, degree));
  }, py::arg("model"), py::arg("lam"), py::arg("degree"),
        "Coefficients of (1 - P)^(-lam) up to total degree `degree`.");

  m.def("smallest_positive_root", [](const std::vector<double>& coeffs) {
    return smallest_positive_root(UnivariatePoly(coeffs));
  }, py::arg("coeffs"), "Coefficients in increasing degree.");
  m.def("ps_poly", [](const AffineModel& model, const std::vector<double>& s) {
    return ps_poly(model, DirectionVector(s)).coeffs();
  }, py::arg("model"), py::arg("s"));
  m.def("log_radius", [](const AffineModel& model, const std::vector<double>& s) {
    return log_radius(model, DirectionVector(s));
  }, py::arg("model"), py::arg("s"));
  m.def("classify", [](const AffineModel& model, const std::vector<double>& theta, double tol) {
    const auto v = classify(model, theta, tol);
    py::dict out;
    out["classification"] = std::string(to_string(v.classification));
    out["margin"] = v.margin;
    out["log_radius"] = std::log(v.radius);
    out["theta_bar"] = v.theta_bar;
    out["s"] = v.s;
    return out;
  }, py::arg("model"), py::arg("theta"), py::arg("tol") = kDefaultMarginTol);
  m.def("boundary_point", [](const AffineModel& model, const std::vector<double>& s) {
    return boundary_point(model, DirectionVector(s));
  }, py::arg("model"), py::arg("s"));
  m.def("boundary_grid",
        [](const AffineModel& model, const std::variant<std::string, std::tuple<double, double, double>>& range,
           const std::optional<std::variant<std::string, std::tuple<double, double, double>>>& range2,
           unsigned threads) {
          std::optional<GridRange> r2;
          if (range2) r2 = to_range(*range2);
          std::vector<std::tuple<std::vector<double>, std::vector<double>, double>> rows;
          {
            py::gil_scoped_release release;
            for (auto& row : boundary_grid(model, to_range(range), r2, threads))
              rows.emplace_back(std::move(row.params), std::move(row.theta), row.residual);
          }
          return rows;
        },
        py::arg("model"), py::arg("range"), py::arg("range2") = py::none(), py::arg("threads") = 1,
        "Rows (s, theta, |A(e^theta)|) over a 'lo:hi:step' grid.");

  py::class_<DistributionSpec>(m, "Distribution")
      .def(py::init<AffineModel, std::vector<double>, double, double>(), py::arg("model"),
           py::arg("a"), py::arg("lam"), py::arg("tol") = 0.0)
      .def_property_readonly("model", &DistributionSpec::model)
      .def_property_readonly("a", [](const DistributionSpec& s) {
        return std::vector<double>(s.a().begin(), s.a().end());
      })
      .def_property_readonly("lam", &DistributionSpec::lambda)
      .def_property_readonly("margin", &DistributionSpec::margin)
      .def_property_readonly("normalizer", &DistributionSpec::normalizer)
      .def("pgf", [](const DistributionSpec& self) {
        const auto pgf = normalized_pgf(self);
        py::dict terms;
        for (const auto& [t, c] : pgf.terms) terms[from_subset(t)] = c;
        return py::make_tuple(pgf.constant, terms);
      }, "(constant, {subset: coefficient}) of the normalized kernel.")
      .def("pmf", [](const DistributionSpec& self, int degree) {
        const PmfTable t = pmf(self, degree);
        return py::make_tuple(series_dict(t.probabilities()), t.tail_mass());
      }, py::arg("degree"), "({alpha: p}, tail_mass) for |alpha| <= degree.")
      .def("mean", [](const DistributionSpec& self) { return mean(self); })
      .def("sampler_degree", [](const DistributionSpec& self) { return sampler_degree(self); })
      .def("sample", [](const DistributionSpec& self, std::size_t count, std::uint64_t seed,
                        std::optional<int> degree) {
        const int d = degree ? *degree : sampler_degree(self);
        py::gil_scoped_release release;
        return sample(self, count, seed, d);
      }, py::arg("count"), py::arg("seed"), py::arg("degree") = py::none());
}
