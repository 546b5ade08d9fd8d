// Published shell-series coefficients for the unit-sphere interference
// functions in 1, 2 and 3 dimensions and for Si(2 pi x)/(2 pi x) in 3 dimensions.

#include "shellfield/decomp.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <span>
#include <string>

#include "shellfield/errors.hpp"
#include "shellfield/specfun.hpp"

namespace shellfield::decomp {

namespace {

// {mu, nu, kappa}
struct Row {
  double mu, nu, kappa;
};

// unit-sphere interference function, N = 3, |x| <= 20
constexpr std::array<Row, 40> kPi3Rows = {{
  {0.000000, 0.149577, 3.974732},
  {0.839261, 0.081904, -4.722464},
  {1.411624, 0.054497, 2.987349},
  {1.952697, 0.042378, -2.323489},
  {2.464160, 0.036608, 2.056706},
  {2.974455, 0.031845, -1.882625},
  {3.483748, 0.030437, 1.823866},
  {3.980074, 0.028966, -1.763604},
  {4.483824, 0.025723, 1.660668},
  {4.987578, 0.024247, -1.611679},
  {5.485233, 0.021983, 1.532103},
  {5.992215, 0.020754, -1.482867},
  {6.490989, 0.020406, 1.490286},
  {6.991365, 0.019200, -1.425480},
  {7.492524, 0.018104, 1.392489},
  {7.991915, 0.017389, -1.356501},
  {8.493796, 0.017035, 1.347738},
  {8.994394, 0.016775, -1.347498},
  {9.494283, 0.016393, 1.325074},
  {9.994853, 0.016184, -1.304771},
  {10.493471, 0.016800, 1.338413},
  {10.993226, 0.016872, -1.336079},
  {11.493476, 0.016796, 1.334134},
  {11.994229, 0.016080, -1.332702},
  {12.495735, 0.018301, 1.332798},
  {12.996825, 0.019754, -1.331953},
  {13.497168, 0.018059, 1.330944},
  {13.997713, 0.016041, -1.329831},
  {14.498717, 0.016684, 1.328876},
  {14.999067, 0.016718, -1.328008},
  {15.496648, 0.016876, 1.337655},
  {15.996165, 0.016851, -1.337766},
  {16.496408, 0.016843, 1.337641},
  {16.996653, 0.016761, -1.337527},
  {17.496881, 0.016769, 1.337448},
  {17.997110, 0.016881, -1.337390},
  {18.497337, 0.017033, 1.337344},
  {18.997558, 0.017155, -1.337322},
  {19.497772, 0.017199, 1.337314},
  {19.997212, 0.016972, -1.337255},
}};

// unit-sphere interference function, N = 1, |x| <= 10
constexpr std::array<Row, 21> kPi1Rows = {{
  {0.000000, 0.131571, 2.173815},
  {0.591792, 0.107565, -1.638004},
  {1.148469, 0.082861, 0.680768},
  {1.687606, 0.065512, -0.343475},
  {2.211743, 0.055550, 0.215743},
  {2.725149, 0.050571, -0.158344},
  {3.232188, 0.048228, 0.127375},
  {3.736620, 0.047272, -0.108157},
  {4.239295, 0.047227, 0.095144},
  {4.739889, 0.047297, -0.085197},
  {5.240482, 0.047119, 0.076789},
  {5.740105, 0.046499, -0.069314},
  {6.241548, 0.045711, 0.062843},
  {6.742026, 0.045170, -0.057479},
  {7.241991, 0.044328, 0.052689},
  {7.742989, 0.043498, -0.048486},
  {8.244333, 0.042899, 0.045129},
  {8.747921, 0.043574, -0.043019},
  {9.242462, 0.044127, 0.040683},
  {9.732445, 0.039877, -0.035737},
  {10.230986, 0.031269, 0.030208},
}};

// unit-sphere interference function, N = 2, |x| <= 10
constexpr std::array<Row, 21> kPi2Rows = {{
  {0.000000, 0.121565, 2.488048},
  {0.742617, 0.073698, -2.253003},
  {1.304418, 0.054291, 1.267576},
  {1.833737, 0.044795, -0.892266},
  {2.347657, 0.040104, 0.718677},
  {2.854680, 0.037505, -0.619125},
  {3.358746, 0.035779, 0.552030},
  {3.861382, 0.034511, -0.502009},
  {4.362868, 0.033351, 0.462110},
  {4.865655, 0.032578, -0.431078},
  {5.366582, 0.032426, 0.408413},
  {5.866127, 0.031651, -0.385374},
  {6.367222, 0.030875, 0.364248},
  {6.867885, 0.030196, -0.345915},
  {7.368364, 0.029513, 0.329532},
  {7.868835, 0.028856, -0.314738},
  {8.369306, 0.028241, 0.301427},
  {8.869483, 0.027629, -0.289143},
  {9.368906, 0.026759, 0.276422},
  {9.867940, 0.025535, -0.261959},
  {10.366720, 0.023456, 0.205540},
}};

// Si(x)/x, N = 3, |x| <= 10
constexpr std::array<Row, 33> kSiOverXRows = {{
  {0.000000, 6.197172, 268.311753},
  {0.000000, 0.163080, 0.806227},
  {2.444275, 3.331012, -206.872124},
  {10.917662, 14.020006, 352.636534},
  {0.020011, 0.006256, -0.000039},
  {0.420455, 0.011020, 0.005567},
  {0.871281, 0.013373, -0.032196},
  {1.391771, 0.021336, 0.138810},
  {1.979248, 0.021204, -0.245133},
  {2.560773, 0.010795, 0.050606},
  {3.482397, 0.048566, 0.448946},
  {5.030498, 0.057977, -0.636492},
  {5.900254, 0.054990, -0.566002},
  {7.510280, 0.104842, 1.231657},
  {8.370087, 0.054051, 0.632798},
  {10.100056, 0.182008, -3.032464},
  {0.140120, 0.003620, -0.000080},
  {0.370197, 0.002062, -0.000136},
  {0.559895, 0.004527, 0.001692},
  {0.839973, 0.002748, 0.001209},
  {1.040030, 0.005487, -0.007025},
  {1.350049, 0.003893, -0.003426},
  {1.580375, 0.005814, 0.016004},
  {1.960182, 0.004838, 0.015088},
  {2.210897, 0.006995, -0.038062},
  {2.990484, 0.013585, -0.041777},
  {4.460091, 0.025375, 0.099499},
  {5.439990, 0.037814, -0.099893},
  {6.610000, 0.050331, 0.249889},
  {9.109993, 0.037952, -0.299975},
  {2.729991, 0.002894, 0.002875},
  {3.709994, 0.002962, 0.004538},
  {4.049998, 0.002976, -0.002545},
}};
struct Entry {
  const char* name;
  const char* alias;
  int dimension;
  double x_max;
  double max_error;
  std::span<const Row> rows;
};

constexpr Entry kEntries[] = {
  {"pi3_interference", "pi3", 3, 20.0, 6.0e-4, kPi3Rows},
  {"pi1_interference", "pi1", 1, 10.0, 7.8e-5, kPi1Rows},
  {"pi2_interference", "pi2", 2, 10.0, 4.1e-4, kPi2Rows},
  {"si_over_x", "si_over_x", 3, 10.0, 2.2e-4, kSiOverXRows},
};

const Entry& find(std::string_view name) {
  for (const Entry& e : kEntries)
    if (name == e.name || name == e.alias)
      return e;
  throw LookupError("unknown bundled table '" + std::string(name) + "'");
}

}  // namespace

ShellModel bundled_table(std::string_view name) {
  const Entry& e = find(name);
  std::vector<ShellTerm> terms;
  terms.reserve(e.rows.size());
  for (const Row& r : e.rows)
    terms.push_back({r.kappa, r.mu, r.nu});
  return ShellModel(e.dimension, std::move(terms), e.x_max, e.name);
}

double bundled_table_max_error(std::string_view name) {
  return find(name).max_error;
}

double si_over_x(double x) {
  const double u = 2.0 * specfun::kPi * std::abs(x);
  return u == 0 ? 1.0 : specfun::sine_integral(u) / u;
}

std::vector<std::string> bundled_table_names() {
  std::vector<std::string> names;
  for (const Entry& e : kEntries)
    names.emplace_back(e.name);
  return names;
}

}  // namespace shellfield::decomp
