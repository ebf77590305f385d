#pragma once

/**
 * @file examples.hpp
 * @brief Shipped scenario files, embedded as JSON text.
 *
 * Each entry is a complete schema-v1 scenario.  Two of them
 * (nonpoisson-bivector, metcon-r3-mismatch) are deliberate failures and make
 * the CLI exit with status 1, reporting a concrete witness.
 */

#include <map>
#include <string>

namespace pdvcli {

inline const std::map<std::string, std::string>& shipped_examples() {
    static const std::map<std::string, std::string> ex = {

        {"sl2-axioms", R"json({
  "schema_version": 1,
  "name": "sl2-axioms",
  "algebras": [{"name": "sl2", "kind": "sl2"}],
  "backends": [{"name": "E", "kind": "point", "algebra": "sl2"}],
  "checks": [
    {"check": "quadlie_verify", "algebra": "sl2"},
    {"check": "courant_axioms", "backend": "E", "probes": 3}
  ]
})json"},

        {"heisenberg-poisson", R"json({
  "schema_version": 1,
  "name": "heisenberg-poisson",
  "charts": [{"name": "M", "coords": ["x", "y", "z"]}],
  "backends": [{"name": "E", "kind": "exact", "chart": "M"}],
  "connections": [
    {"name": "pi", "kind": "cotangent_bivector", "backend": "E",
     "entries": [[0, 1, [["1", 0, 0, 1]]]]}
  ],
  "samples": [["0", "0", "0"], ["1", "-1", "2"], ["2", "1", "-1"], ["-1", "2", "1"]],
  "checks": [
    {"check": "pseudo_dirac", "connection": "pi"},
    {"check": "lie_algebroid", "connection": "pi"}
  ]
})json"},

        {"nonpoisson-bivector", R"json({
  "schema_version": 1,
  "name": "nonpoisson-bivector",
  "charts": [{"name": "M", "coords": ["x", "y", "z"]}],
  "backends": [{"name": "E", "kind": "exact", "chart": "M"}],
  "connections": [
    {"name": "pi", "kind": "cotangent_bivector", "backend": "E",
     "entries": [[0, 1, [["1", 0, 0, 0]]], [0, 2, [["1", 1, 0, 0]]]]}
  ],
  "samples": [["0", "0", "0"], ["1", "-1", "2"], ["2", "1", "-1"]],
  "checks": [
    {"check": "pseudo_dirac", "connection": "pi"}
  ]
})json"},

        {"metcon-r3", R"json({
  "schema_version": 1,
  "name": "metcon-r3",
  "charts": [{"name": "M", "coords": ["x", "y", "z"]}],
  "backends": [{"name": "E", "kind": "exact", "chart": "M"}],
  "connections": [
    {"name": "met", "kind": "metric_omega", "backend": "E",
     "omega": [{"indices": [0, 1], "value": [["1", 0, 0, 1]]}]}
  ],
  "samples": [["0", "0", "0"], ["1", "-1", "2"], ["2", "1", "-1"]],
  "checks": [
    {"check": "pseudo_dirac", "connection": "met"},
    {"check": "torsion_equals", "connection": "met",
     "triple": [0, 1, 2], "value": [["2", 0, 0, 0]]}
  ]
})json"},

        {"metcon-r3-mismatch", R"json({
  "schema_version": 1,
  "name": "metcon-r3-mismatch",
  "charts": [{"name": "M", "coords": ["x", "y", "z"]}],
  "backends": [{"name": "E", "kind": "exact", "chart": "M"}],
  "connections": [
    {"name": "met", "kind": "metric_omega", "backend": "E",
     "omega": [{"indices": [0, 1], "value": [["1", 0, 0, 1]]}],
     "eta": "zero"}
  ],
  "samples": [["0", "0", "0"], ["1", "-1", "2"], ["2", "1", "-1"]],
  "checks": [
    {"check": "pseudo_dirac", "connection": "met"}
  ]
})json"},

        {"manin-triple-2d", R"json({
  "schema_version": 1,
  "name": "manin-triple-2d",
  "charts": [{"name": "gstar", "coords": ["p", "q"]}],
  "algebras": [{"name": "d", "kind": "aff1_double"}],
  "backends": [
    {"name": "E", "kind": "action", "chart": "gstar", "algebra": "d",
     "rho": [
       [[], [["1", 0, 1]]],
       [[["-1", 0, 1]], []],
       [[["1", 0, 0]], []],
       [[], [["1", 0, 0]]]
     ]}
  ],
  "connections": [
    {"name": "gstar-flat", "kind": "frame", "backend": "E",
     "sections": [
       [[], [], [["1", 0, 0]], []],
       [[], [], [], [["1", 0, 0]]]
     ],
     "a": [[[], []], [[], []]]}
  ],
  "samples": [["0", "0"], ["1", "-1"], ["2", "1"], ["-1", "3"]],
  "checks": [
    {"check": "courant_axioms", "backend": "E", "probes": 3},
    {"check": "action_decomposition", "backend": "E",
     "e": [["1", "0", "0", "0"], ["0", "1", "0", "0"]],
     "f": [["0", "0", "1", "0"], ["0", "0", "0", "1"]],
     "nabla_zero": true},
    {"check": "flat_sections", "connection": "gstar-flat",
     "s": [[["1", 0, 0]], []],
     "t": [[], [["1", 0, 0]]]}
  ]
})json"},

        {"matched-pair-generic", R"json({
  "schema_version": 1,
  "name": "matched-pair-generic",
  "charts": [{"name": "N", "coords": ["p", "q", "P", "Q"]}],
  "algebras": [
    {"name": "d", "kind": "aff1_double"},
    {"name": "dd", "kind": "direct_sum_conjugate", "of": "d"}
  ],
  "backends": [
    {"name": "E", "kind": "action", "chart": "N", "algebra": "dd",
     "rho": [
       [[], [["1", 0, 1, 0, 0]], [], []],
       [[["-1", 0, 1, 0, 0]], [], [], []],
       [[["1", 0, 0, 0, 0]], [], [], []],
       [[], [["1", 0, 0, 0, 0]], [], []],
       [[], [], [], [["1", 0, 0, 0, 1]]],
       [[], [], [["-1", 0, 0, 0, 1]], []],
       [[], [], [["1", 0, 0, 0, 0]], []],
       [[], [], [], [["1", 0, 0, 0, 0]]]
     ]}
  ],
  "samples": [["1", "2", "1", "3"], ["2", "-1", "1", "1"], ["0", "1", "2", "-1"]],
  "checks": [
    {"check": "action_decomposition", "backend": "E",
     "e": [["1", "0", "0", "0", "0", "0", "0", "0"],
           ["0", "1", "0", "0", "0", "0", "0", "0"],
           ["0", "0", "1", "0", "0", "0", "0", "0"],
           ["0", "0", "0", "1", "0", "0", "0", "0"]],
     "f": [["0", "0", "0", "0", "1", "0", "0", "0"],
           ["0", "0", "0", "0", "0", "1", "0", "0"],
           ["0", "0", "0", "0", "0", "0", "1", "0"],
           ["0", "0", "0", "0", "0", "0", "0", "1"]],
     "nabla_zero": false}
  ]
})json"},

        {"bundle-of-liealgebras", R"json({
  "schema_version": 1,
  "name": "bundle-of-liealgebras",
  "charts": [{"name": "M", "coords": ["x", "y", "z"]}],
  "algebras": [{"name": "sl2", "kind": "sl2"}],
  "backends": [{"name": "E", "kind": "exact", "chart": "M"}],
  "connections": [
    {"name": "bun", "kind": "bundle_of_algebras", "backend": "E", "algebra": "sl2"}
  ],
  "samples": [["0", "0", "0"], ["1", "-1", "2"], ["2", "1", "-1"]],
  "checks": [
    {"check": "pseudo_dirac", "connection": "bun"},
    {"check": "lie_algebroid", "connection": "bun"}
  ]
})json"},

        {"transverse-tm-tstarm", R"json({
  "schema_version": 1,
  "name": "transverse-tm-tstarm",
  "charts": [{"name": "M", "coords": ["x", "y"]}],
  "backends": [{"name": "E", "kind": "exact", "chart": "M"}],
  "samples": [["0", "0"], ["1", "-1"], ["2", "1"]],
  "checks": [
    {"check": "transverse_constant", "backend": "E",
     "e": [["1", "0", "0", "0"], ["0", "1", "0", "0"]],
     "f": [["0", "0", "1", "0"], ["0", "0", "0", "1"]],
     "nabla_zero": true, "vector_parts_zero": true}
  ]
})json"},

        {"correspondence-roundtrip", R"json({
  "schema_version": 1,
  "name": "correspondence-roundtrip",
  "charts": [{"name": "M", "coords": ["x", "y", "z"]}],
  "backends": [{"name": "E", "kind": "exact", "chart": "M"}],
  "connections": [
    {"name": "pi", "kind": "cotangent_bivector", "backend": "E",
     "entries": [[0, 1, [["1", 0, 0, 1]]]]},
    {"name": "met", "kind": "metric_omega", "backend": "E",
     "omega": [{"indices": [0, 1], "value": [["1", 0, 0, 1]]}]}
  ],
  "samples": [["0", "0", "0"], ["1", "-1", "2"], ["2", "1", "-1"]],
  "checks": [
    {"check": "vb_correspondence", "connection": "pi"},
    {"check": "vb_correspondence", "connection": "met"},
    {"check": "lift_calculus", "backend": "E", "probes": 3}
  ]
})json"},

        {"ann-lemma-fuzz", R"json({
  "schema_version": 1,
  "name": "ann-lemma-fuzz",
  "checks": [
    {"check": "ann_fuzz", "trials": 100, "max_dim": 6}
  ]
})json"},
    };
    return ex;
}

} // namespace pdvcli
