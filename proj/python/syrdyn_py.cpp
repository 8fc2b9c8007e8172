#include "syrdyn/chains.hpp"
#include "syrdyn/maps.hpp"
#include "syrdyn/measure.hpp"
#include "syrdyn/partition.hpp"
#include "syrdyn/serialize.hpp"
#include "syrdyn/trajectory.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>

namespace py = pybind11;
using namespace syrdyn;

// Python int <-> cpp_int through the decimal text form; exact at any size.
namespace pybind11::detail {

template <>
struct type_caster<Integer> {
  PYBIND11_TYPE_CASTER(Integer, const_name("int"));

  bool load(handle src, bool convert) {
    if (!src) return false;
    if (!PyLong_Check(src.ptr())) {
      if (!convert || !PyIndex_Check(src.ptr())) return false;
    }
    object as_int = reinterpret_steal<object>(PyNumber_Index(src.ptr()));
    if (!as_int) {
      PyErr_Clear();
      return false;
    }
    object text = reinterpret_steal<object>(PyObject_Str(as_int.ptr()));
    if (!text) {
      PyErr_Clear();
      return false;
    }
    value = Integer(text.cast<std::string>());
    return true;
  }

  static handle cast(const Integer& src, return_value_policy, handle) {
    const std::string text = src.str();
    return PyLong_FromString(text.c_str(), nullptr, 10);
  }
};

}  // namespace pybind11::detail

namespace {

Limits make_limits(std::uint64_t max_steps, const Integer& max_value) {
  Limits l;
  l.max_steps = max_steps;
  l.max_value = max_value;
  l.check();
  return l;
}

py::object fraction(const ScaledDyadic& v) {
  static auto* Fraction = new py::object(py::module_::import("fractions").attr("Fraction"));
  const Integer denominator = (Integer(1) << v.dyadic().exponent()) * v.scale();
  return (*Fraction)(v.dyadic().numerator(), denominator);
}

py::dict to_dict(const Json& j) {
  static auto* loads = new py::object(py::module_::import("json").attr("loads"));
  return (*loads)(j.dump()).cast<py::dict>();
}

std::vector<CycleInfo> to_cycles(const std::vector<std::vector<Nat>>& cycles) {
  std::vector<CycleInfo> out;
  out.reserve(cycles.size());
  for (const auto& c : cycles) out.push_back(CycleInfo::from_orbit(c));
  return out;
}

std::vector<std::vector<Nat>> from_cycles(const std::vector<CycleInfo>& cycles) {
  std::vector<std::vector<Nat>> out;
  out.reserve(cycles.size());
  for (const auto& c : cycles) out.push_back(c.members());
  return out;
}

const Integer kDefaultCeiling = pow_int(10, 40);

}  // namespace

PYBIND11_MODULE(_syrdyn, m) {
  m.doc() = "Exact orbit, preimage and measure analysis of Collatz and Syracuse-type maps";

  py::register_exception<MapError>(m, "MapError", PyExc_ValueError);
  py::register_exception<ChainError>(m, "ChainError", PyExc_ValueError);
  py::register_exception<ForestError>(m, "ForestError", PyExc_ValueError);
  py::register_exception<VerificationFailure>(m, "VerificationFailure", PyExc_RuntimeError);

  // --- maps ------------------------------------------------------------------
  py::class_<MapDescriptor>(m, "Map")
      .def(py::init(&parse_descriptor), py::arg("descriptor"))
      .def_property_readonly("modulus", &MapDescriptor::modulus)
      .def_property_readonly("branches",
                             [](const MapDescriptor& map) {
                               std::vector<std::pair<Integer, Integer>> out;
                               for (const Branch& b : map.branches()) out.emplace_back(b.multiplier, b.offset);
                               return out;
                             })
      .def_property_readonly("is_collatz", &MapDescriptor::is_collatz)
      .def("apply", &MapDescriptor::apply, py::arg("x"))
      .def("__call__", &MapDescriptor::apply, py::arg("x"))
      .def("preimage", &MapDescriptor::preimage, py::arg("y"))
      .def("__eq__", [](const MapDescriptor& a, const MapDescriptor& b) { return a == b; })
      .def("__str__", &MapDescriptor::to_string)
      .def("__repr__", [](const MapDescriptor& map) { return "Map('" + map.to_string() + "')"; });

  m.def("collatz", &collatz);
  m.def("pxr", &pxr_map, py::arg("p"), py::arg("r"));
  m.def("general_map", [](const Integer& d, const std::vector<std::pair<Integer, Integer>>& branches) {
    RawMap raw{d, {}};
    for (const auto& [mult, off] : branches) raw.branches.push_back(Branch{mult, off});
    return validate(std::move(raw));
  }, py::arg("modulus"), py::arg("branches"), "Validated map from (multiplier, offset) pairs indexed by residue.");

  // --- trajectory -------------------------------------------------------------
  py::class_<TrajectoryReport>(m, "Trajectory")
      .def_readonly("start", &TrajectoryReport::start)
      .def_readonly("steps", &TrajectoryReport::steps)
      .def_property_readonly("status", [](const TrajectoryReport& r) { return std::string(to_string(r.status)); })
      .def_property_readonly("cycle",
                             [](const TrajectoryReport& r) -> std::optional<std::vector<Nat>> {
                               if (!r.cycle) return std::nullopt;
                               return r.cycle->members();
                             })
      .def_property_readonly("entry_index",
                             [](const TrajectoryReport& r) -> std::optional<std::size_t> {
                               if (!r.cycle) return std::nullopt;
                               return r.entry_index;
                             })
      .def_readonly("max_excursion", &TrajectoryReport::max_excursion)
      .def("to_dict", [](const TrajectoryReport& r) { return to_dict(to_json(r)); });

  m.def("iterate",
        [](const MapDescriptor& map, const Nat& start, std::uint64_t max_steps, const Integer& max_value) {
          return iterate(map, start, make_limits(max_steps, max_value));
        },
        py::arg("map"), py::arg("start"), py::arg("max_steps") = 100000, py::arg("max_value") = kDefaultCeiling);

  m.def("find_cycles",
        [](const MapDescriptor& map, std::uint64_t bound, std::uint64_t max_steps, const Integer& max_value,
           unsigned threads) {
          std::vector<CycleInfo> found;
          {
            py::gil_scoped_release release;
            found = find_cycles(map, bound, make_limits(max_steps, max_value), threads);
          }
          return from_cycles(found);
        },
        py::arg("map"), py::arg("bound"), py::arg("max_steps") = 100000, py::arg("max_value") = kDefaultCeiling,
        py::arg("threads") = 1);

  m.def("check_power_cycle", [](unsigned k) { return check_power_cycle(k).members(); }, py::arg("k"));

  // --- partition --------------------------------------------------------------
  py::class_<PartitionResult>(m, "Partition")
      .def_readonly("domain_bound", &PartitionResult::domain_bound)
      .def_readonly("c_set", &PartitionResult::c_set)
      .def_readonly("d1_set", &PartitionResult::d1_set)
      .def_readonly("d2_candidates", &PartitionResult::d2_candidates)
      .def_property_readonly("cycles", [](const PartitionResult& r) { return from_cycles(r.cycles); })
      .def("label", [](const PartitionResult& r, std::uint64_t x) { return std::string(to_string(r.at(x).cls)); },
           py::arg("x"), "\"C\", \"D1\" or \"D2?\"")
      .def("steps", [](const PartitionResult& r, std::uint64_t x) { return r.at(x).steps; }, py::arg("x"))
      .def("to_csv", &partition_csv)
      .def("summary", [](const PartitionResult& r) { return to_dict(partition_summary(r)); });

  m.def("partition",
        [](const MapDescriptor& map, std::uint64_t bound, std::uint64_t max_steps, const Integer& max_value) {
          py::gil_scoped_release release;
          return partition(map, bound, make_limits(max_steps, max_value));
        },
        py::arg("map"), py::arg("bound"), py::arg("max_steps") = 100000, py::arg("max_value") = kDefaultCeiling);

  // --- measure ----------------------------------------------------------------
  py::class_<MeasureAssignment, std::shared_ptr<MeasureAssignment>>(m, "Measure")
      .def_property_readonly("depth", [](const MeasureAssignment& a) { return a.forest.depth(); })
      .def_property_readonly("cycles", [](const MeasureAssignment& a) { return from_cycles(a.forest.cycles()); })
      .def_property_readonly("total", [](const MeasureAssignment& a) { return fraction(a.total); })
      .def_property_readonly("covered",
                             [](const MeasureAssignment& a) {
                               std::vector<Nat> out;
                               for (const auto& [x, node] : a.forest.nodes()) out.push_back(x);
                               return out;
                             })
      .def("levels", [](const MeasureAssignment& a, std::size_t cycle) { return a.forest.levels(cycle); },
           py::arg("cycle"))
      .def("value", [](const MeasureAssignment& a, const Nat& x) { return fraction(a.value(x)); }, py::arg("x"))
      .def("cycle_value",
           [](const MeasureAssignment& a, std::size_t cycle, const Nat& x) {
             const auto& table = a.per_cycle.at(cycle);
             auto it = table.find(x);
             return fraction(it == table.end() ? ScaledDyadic{} : it->second);
           },
           py::arg("cycle"), py::arg("x"))
      .def("measure_of", [](const MeasureAssignment& a, const std::vector<Nat>& set) {
        return fraction(measure_of(a, set));
      }, py::arg("set"))
      .def("construction_ok", [](const MeasureAssignment& a) { return verify_construction(a).ok(); })
      .def("check_power_bound",
           [](const MeasureAssignment& a, std::uint64_t trials, unsigned max_n, std::uint64_t seed) {
             return to_dict(to_json(check_power_bound(a, trials, max_n, seed)));
           },
           py::arg("trials"), py::arg("max_n"), py::arg("seed") = 20240607)
      .def("to_dict", [](const MeasureAssignment& a) {
        return to_dict(to_json(a, verify_construction(a), nullptr));
      });

  m.def("measure",
        [](const MapDescriptor& map, const std::vector<std::vector<Nat>>& cycles, unsigned depth) {
          return std::make_shared<MeasureAssignment>(assign_measure(build_forest(map, to_cycles(cycles), depth)));
        },
        py::arg("map"), py::arg("cycles"), py::arg("depth"));

  // --- chains -----------------------------------------------------------------
  m.def("classify", [](const Nat& n) { return std::string(to_string(classify(n))); }, py::arg("n"));
  m.def("decompose",
        [](const Nat& n) {
          const ChainHeadForm f = decompose(n);
          return py::make_tuple(f.a, f.b, f.h);
        },
        py::arg("n"), "(a, b, h) with n = 3^a 2^b h - 1");
  m.def("structured_preimage",
        [](const Nat& n) {
          const StructuredPreimage s = structured_preimage(n);
          return py::make_tuple(s.odd_branch, s.even_branch);
        },
        py::arg("n"));
  m.def("family", [](std::uint64_t a, const Nat& h) { return family_of(a, h).members; }, py::arg("a"), py::arg("h"));
  m.def("chain",
        [](const Nat& n, std::size_t forward, std::size_t backward) { return to_dict(to_json(chain_of(n, forward, backward))); },
        py::arg("n"), py::arg("forward") = 1, py::arg("backward") = 1);
  m.def("chain_dot",
        [](const Nat& n, std::size_t forward, std::size_t backward) { return to_dot(chain_of(n, forward, backward)); },
        py::arg("n"), py::arg("forward") = 1, py::arg("backward") = 1);
  m.def("preimage_tree",
        [](const MapDescriptor& map, const Nat& root, unsigned depth) {
          return to_dict(to_json(build_preimage_tree(map, root, depth)));
        },
        py::arg("map"), py::arg("root"), py::arg("depth"));
  m.def("tree_dot",
        [](const MapDescriptor& map, const Nat& root, unsigned depth) {
          return to_dot(build_preimage_tree(map, root, depth));
        },
        py::arg("map"), py::arg("root"), py::arg("depth"));

  m.def("chain_criterion", &chain_criterion, py::arg("p"), py::arg("r"));
  m.def("two_preimage_class", &two_preimage_class, py::arg("p"), py::arg("r"));
  m.def("verify_family_identity",
        [](const Integer& p, const Integer& r, std::uint64_t alpha_max, std::uint64_t beta_max, std::uint64_t k_max) {
          return to_dict(to_json(verify_family_identity(p, r, family_sample_grid(alpha_max, beta_max, k_max, 2 * p))));
        },
        py::arg("p"), py::arg("r"), py::arg("alpha_max") = 4, py::arg("beta_max") = 4, py::arg("k_max") = 50);
  m.def("verify_family_connection",
        [](const Integer& p, const Integer& r, std::size_t count, std::uint64_t seed) {
          return to_dict(to_json(verify_family_connection(p, r, sample_tails(p, count, seed))));
        },
        py::arg("p"), py::arg("r"), py::arg("count") = 500, py::arg("seed") = 20240607);
}
