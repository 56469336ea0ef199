// Copyright 2026 The Soundmatch Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <span>
#include <string>
#include <vector>

#include "soundmatch/harness.h"

namespace py = pybind11;
using namespace soundmatch;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

std::span<const double> View(const Array& a) {
  if (a.ndim() != 1) throw std::invalid_argument("expected a 1-d array");
  return {a.data(), static_cast<std::size_t>(a.size())};
}

Array ToArray(const std::vector<double>& v) {
  Array out(static_cast<py::ssize_t>(v.size()));
  std::copy(v.begin(), v.end(), out.mutable_data());
  return out;
}

Params<double> ToParams(const std::vector<double>& v) {
  if (v.size() != kNumParams) throw std::invalid_argument("expected 2 parameters");
  return {v[0], v[1]};
}

py::dict TrialToDict(const TrialRecord& r) {
  py::dict d;
  d["id"] = r.id;
  d["program"] = std::string(ProgramName(r.program));
  d["loss"] = std::string(LossName(r.loss));
  d["status"] = std::string(TrialStatusName(r.status));
  d["target_raw"] = std::vector<double>(r.target.raw.begin(), r.target.raw.end());
  d["target_normalized"] =
      std::vector<double>(r.target.normalized.begin(), r.target.normalized.end());
  d["final_normalized"] = std::vector<double>(r.final.normalized.begin(), r.final.normalized.end());
  d["losses"] = r.losses;
  d["noise_seed"] = r.noise_seed;
  d["seconds"] = r.duration_seconds;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Differentiable iterative sound matching";
  m.attr("SAMPLE_RATE") = kSampleRate;
  m.attr("SIGNAL_LENGTH") = kSignalLength;
  m.attr("DEFAULT_MASTER_SEED") = kDefaultMasterSeed;

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

  m.def("programs", [] {
    std::vector<std::string> out;
    for (ProgramId p : kAllPrograms) out.emplace_back(ProgramName(p));
    return out;
  });
  m.def("losses", [] {
    std::vector<std::string> out;
    for (LossId l : kAllLosses) out.emplace_back(LossName(l));
    return out;
  });

  m.def(
      "render",
      [](const std::string& program, const std::vector<double>& raw, std::uint32_t noise_seed) {
        const SynthProgram p = SynthProgram::Make(ParseProgram(program));
        const ClampResult<double> c = ClampForRender(ToParams(raw), p);
        return ToArray(p.Render(c.raw, noise_seed));
      },
      py::arg("program"), py::arg("raw"), py::arg("noise_seed") = 1,
      "Render one second of audio from raw parameters (clamped to range).");

  m.def(
      "denormalize",
      [](const std::string& program, const std::vector<double>& normalized) {
        const ParamVector v = SynthProgram::Make(ParseProgram(program)).FromNormalized(
            ToParams(normalized));
        return std::vector<double>(v.raw.begin(), v.raw.end());
      },
      py::arg("program"), py::arg("normalized"));

  m.def(
      "loss",
      [](const std::string& loss, const Array& candidate, const Array& target) {
        return MakeLoss(ParseLoss(loss), View(target))->Evaluate(View(candidate));
      },
      py::arg("loss"), py::arg("candidate"), py::arg("target"));

  m.def(
      "loss_and_grad",
      [](const std::string& program, const std::string& loss,
         const std::vector<double>& normalized, const Array& target, std::uint32_t noise_seed) {
        const SynthProgram p = SynthProgram::Make(ParseProgram(program));
        const ClampResult<Dual2> lifted = LiftNormalized(ToParams(normalized), p);
        const std::vector<Dual2> sig = p.Render(lifted.raw, noise_seed);
        const Dual2 v = MakeLoss(ParseLoss(loss), View(target))->Evaluate(std::span<const Dual2>(sig));
        return py::make_tuple(v.value, std::vector<double>(v.grad.begin(), v.grad.end()));
      },
      py::arg("program"), py::arg("loss"), py::arg("normalized"), py::arg("target"),
      py::arg("noise_seed") = 1,
      "Loss value and its gradient with respect to the normalized parameters.");

  m.def(
      "run_trial",
      [](const std::string& program, const std::string& loss, int index, std::uint64_t master_seed,
         int max_iterations) {
        const ProgramId p = ParseProgram(program);
        const LossId l = ParseLoss(loss);
        MatchConfig c;
        c.max_iterations = max_iterations;
        TrialRecord r;
        {
          py::gil_scoped_release release;
          r = RunTrial(p, l, index, TrialSeed(master_seed, p, l, index), c);
        }
        return TrialToDict(r);
      },
      py::arg("program"), py::arg("loss"), py::arg("index") = 0,
      py::arg("master_seed") = kDefaultMasterSeed, py::arg("max_iterations") = 200);

  m.def(
      "mss", [](const Array& a, const Array& b) { return Mss(View(a), View(b)); }, py::arg("output"),
      py::arg("target"));

  m.def(
      "kruskal_wallis",
      [](const std::vector<std::vector<double>>& groups) {
        const KruskalWallisResult r = KruskalWallis(groups);
        return py::make_tuple(r.h, r.p);
      },
      py::arg("groups"));

  m.def(
      "npsk_rank",
      [](const std::vector<std::vector<double>>& groups, bool lower_is_better) {
        return NpskRank(groups, lower_is_better ? Direction::kLowerBetter
                                                : Direction::kHigherBetter);
      },
      py::arg("groups"), py::arg("lower_is_better") = true);

  m.def(
      "spearman",
      [](const Array& x, const Array& y) {
        const SpearmanResult r = Spearman(View(x), View(y));
        return py::make_tuple(r.rho, r.p);
      },
      py::arg("x"), py::arg("y"));

  m.def(
      "sweep",
      [](const std::string& variant, int grid, std::uint32_t noise_seed) {
        SweepSpec s;
        s.variant = ParseSweepVariant(variant);
        s.grid = grid;
        s.noise_seed = noise_seed;
        SweepTable t;
        {
          py::gil_scoped_release release;
          t = SweepLandscape(s);
        }
        py::dict d;
        d["grid"] = ToArray(t.grid);
        d["target"] = t.target;
        d["target_cell"] = t.target_cell;
        for (std::size_t l = 0; l < kAllLosses.size(); ++l) {
          d[py::str(std::string(LossName(kAllLosses[l])))] = ToArray(t.normalized[l]);
        }
        return d;
      },
      py::arg("variant") = "hp-noise", py::arg("grid") = 128, py::arg("noise_seed") = 1);

  m.def(
      "encode_wav",
      [](const Array& samples) {
        const std::string bytes = EncodeWav(View(samples));
        return py::bytes(bytes);
      },
      py::arg("samples"));
}
