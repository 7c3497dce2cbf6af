// Copyright 2026 The funnelkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Python bindings. Matrices cross the boundary as complex NumPy arrays; the
// reference state is held through a small handle so Python never sees a
// const shared pointer.

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "funnelkit/errors.hpp"
#include "funnelkit/primitives.hpp"
#include "funnelkit/runner.hpp"
#include "funnelkit/statealgebra.hpp"

namespace py = pybind11;
using namespace funnelkit;

namespace {

struct StateHandle {
  StatePtr ptr;
};

NormScope parse_scope(const std::string& scope, int level) {
  if (scope == "top") return NormScope::top();
  if (scope == "full") return NormScope::full_bh();
  if (scope == "level") return NormScope::at_level(level);
  throw ContractError("unknown norm scope '" + scope + "' (top, full, level)");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "funnelkit: state theory on finite funnels of matrix algebras";

  py::register_exception<Error>(m, "FunnelError");
  py::register_exception<ConfigurationError>(m, "ConfigurationError", m.attr("FunnelError"));
  py::register_exception<ContractError>(m, "ContractError", m.attr("FunnelError"));

  py::enum_<StateProfile>(m, "StateProfile")
      .value("RANDOM_FULL_RANK", StateProfile::RandomFullRank)
      .value("PURE", StateProfile::Pure)
      .value("NEAR_TRACIAL", StateProfile::NearTracial);

  py::class_<FunnelTower>(m, "FunnelTower")
      .def(py::init(&FunnelTower::build), py::arg("factor_dims"))
      .def_property_readonly("levels", &FunnelTower::levels)
      .def_property_readonly("top_dim", [](const FunnelTower& t) { return t.top_dim(); })
      .def_property_readonly("factor_dims", &FunnelTower::factor_dims)
      .def("dim", [](const FunnelTower& t, int level) { return t.dim(level); }, py::arg("level"))
      .def("__repr__", [](const FunnelTower& t) {
        std::string s = "FunnelTower(";
        for (std::size_t i = 0; i < t.factor_dims().size(); ++i) s += (i ? ", " : "") + std::to_string(t.factor_dims()[i]);
        return s + ")";
      });

  py::class_<StateHandle>(m, "GenericState")
      .def_static(
          "sample",
          [](const FunnelTower& tower, std::uint64_t seed, StateProfile profile) {
            return StateHandle{GenericState::sample(tower, seed, profile)};
          },
          py::arg("tower"), py::arg("seed"), py::arg("profile") = StateProfile::RandomFullRank)
      .def_static(
          "from_density",
          [](const FunnelTower& tower, const CMatrix& lambda) {
            return StateHandle{GenericState::from_density(tower, lambda)};
          },
          py::arg("tower"), py::arg("density"))
      .def_property_readonly("tower", [](const StateHandle& s) { return s.ptr->tower(); })
      .def_property_readonly("density", [](const StateHandle& s) { return s.ptr->lambda(); })
      .def_property_readonly("spectrum", [](const StateHandle& s) { return s.ptr->spectrum(); })
      .def_property_readonly("omega", [](const StateHandle& s) { return s.ptr->omega_vector(); })
      .def_property_readonly("separating", [](const StateHandle& s) { return s.ptr->separating(); })
      .def(
          "expectation",
          [](const StateHandle& s, int level, const CMatrix& a) {
            return s.ptr->expectation(make_local(s.ptr->tower(), level, a));
          },
          py::arg("level"), py::arg("operator"))
      .def("reduced", [](const StateHandle& s, int level) { return s.ptr->reduced(level); }, py::arg("level"));

  py::class_<ExcitationState>(m, "ExcitationState")
      .def_property_readonly("level", &ExcitationState::level)
      .def_property_readonly("operator", [](const ExcitationState& e) { return e.op().matrix; })
      .def_property_readonly("top_operator", &ExcitationState::top_op)
      .def_property_readonly("density", &ExcitationState::density)
      .def_property_readonly("vector_form", &ExcitationState::vector_form)
      .def("evaluate", [](const ExcitationState& e, int level, const CMatrix& c) {
        return evaluate(e, make_local(e.reference().tower(), level, c));
      }, py::arg("level"), py::arg("operator"));

  m.def(
      "excitation",
      [](const StateHandle& s, int level, const CMatrix& a) {
        return make_excitation(s.ptr, make_local(s.ptr->tower(), level, a));
      },
      py::arg("state"), py::arg("level"), py::arg("operator"));
  m.def("vacuum_excitation", [](const StateHandle& s) { return vacuum_excitation(s.ptr); }, py::arg("state"));
  m.def(
      "lift_phase",
      [](const StateHandle& s, int level, const CMatrix& a, const CMatrix& b) {
        const FunnelTower& t = s.ptr->tower();
        return lift_phase(s.ptr, make_local(t, level, a), make_local(t, level, b)).value;
      },
      py::arg("state"), py::arg("level"), py::arg("a"), py::arg("b"));
  m.def("overlap", &overlap, py::arg("a"), py::arg("b"));
  m.def("transition_probability", &transition_probability, py::arg("a"), py::arg("b"));
  m.def("uhlmann_fidelity", &uhlmann_fidelity, py::arg("a"), py::arg("b"));
  m.def(
      "norm_distance",
      [](const ExcitationState& a, const ExcitationState& b, const std::string& scope, int level) {
        return norm_distance(a, b, parse_scope(scope, level));
      },
      py::arg("a"), py::arg("b"), py::arg("scope") = "top", py::arg("level") = 0);
  m.def(
      "ut_probability",
      [](const ExcitationState& a, int level, const CMatrix& e, Complex t) {
        return ut_probability(make_local(a.reference().tower(), level, e), Phase::checked(t), a);
      },
      py::arg("state"), py::arg("level"), py::arg("projection"), py::arg("t"));
  m.def("vacuum_detector", [](const StateHandle& s) { return vacuum_detector(s.ptr).unitary; }, py::arg("state"));
  m.def(
      "commensurable",
      [](const CMatrix& u1, const CMatrix& u2) {
        const Commensurability c = commensurable(u1, u2);
        return py::make_tuple(c.commensurable, c.phase, c.residual, c.commute);
      },
      py::arg("u1"), py::arg("u2"));
  m.def(
      "algebra_product_kernel",
      [](const ExcitationState& a, const ExcitationState& b) {
        return times(StateAlgebraElement::from_excitation(a), StateAlgebraElement::from_excitation(b)).kernel();
      },
      py::arg("a"), py::arg("b"));

  m.def(
      "verify_json",
      [](const std::string& config) {
        py::gil_scoped_release release;
        return report_to_json(run(parse_config(nlohmann::json::parse(config)))).dump();
      },
      py::arg("config"), "Runs the configured suites and returns the report as a JSON string.");
  m.def("suite_ids", [] {
    std::vector<std::string> ids;
    for (const SuiteListing& s : list_suites()) ids.push_back(s.id);
    return ids;
  });
  m.def("demo_text", [](const std::string& config) {
    return emit_demo_tables(parse_config(nlohmann::json::parse(config))).text;
  }, py::arg("config"));
  m.attr("__version__") = engine_version();
}
