// Copyright 2026 The Perturbench Authors
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

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "perturbench/common.h"
#include "perturbench/embed.h"
#include "perturbench/errors.h"
#include "perturbench/lexicons.h"
#include "perturbench/metrics.h"
#include "perturbench/perturb.h"
#include "perturbench/textcore.h"

namespace py = pybind11;
namespace pb = perturbench;

namespace {

using EditTuple = std::tuple<std::size_t, std::size_t, std::string>;

std::vector<pb::text::TokenSequence> TokenizeAll(const std::vector<std::string>& texts) {
  std::vector<pb::text::TokenSequence> out;
  out.reserve(texts.size());
  for (const auto& t : texts) out.push_back(pb::text::Tokenize(t));
  return out;
}

pb::metrics::GleuConfig MakeGleuConfig(std::size_t iterations, std::uint64_t seed,
                                       std::size_t max_n) {
  pb::metrics::GleuConfig cfg;
  cfg.iterations = iterations;
  cfg.seed = seed;
  cfg.max_n = max_n;
  cfg.Validate();
  return cfg;
}

double Gleu(const std::string& source, const std::vector<std::string>& references,
            const std::string& hypothesis, std::size_t iterations, std::uint64_t seed,
            std::size_t max_n) {
  return pb::metrics::Gleu(pb::text::Tokenize(source), TokenizeAll(references),
                           pb::text::Tokenize(hypothesis),
                           MakeGleuConfig(iterations, seed, max_n));
}

py::tuple CorpusGleu(const std::vector<std::string>& sources,
                     const std::vector<std::vector<std::string>>& references,
                     const std::vector<std::string>& hypotheses, std::size_t iterations,
                     std::uint64_t seed, std::size_t max_n, std::size_t jobs) {
  std::vector<std::vector<pb::text::TokenSequence>> refs;
  refs.reserve(references.size());
  for (const auto& r : references) refs.push_back(TokenizeAll(r));
  const auto cfg = MakeGleuConfig(iterations, seed, max_n);
  pb::metrics::CorpusGleuResult r;
  {
    py::gil_scoped_release release;
    r = pb::metrics::CorpusGleu(TokenizeAll(sources), refs, TokenizeAll(hypotheses), cfg, jobs);
  }
  return py::make_tuple(r.corpus_score, r.per_sentence);
}

std::vector<EditTuple> ExtractEdits(const std::string& source, const std::string& corrected) {
  std::vector<EditTuple> out;
  for (const auto& e : pb::metrics::ExtractEdits(pb::text::Tokenize(source),
                                                 pb::text::Tokenize(corrected))
                           .edits) {
    out.emplace_back(e.span.begin, e.span.end, e.correction);
  }
  return out;
}

std::vector<std::string> ApplyEdits(const std::vector<std::string>& tokens,
                                    const std::vector<EditTuple>& edits) {
  pb::metrics::EditSet set;
  for (const auto& [b, e, c] : edits) set.edits.push_back({{b, e}, c});
  return pb::metrics::ApplyEdits(tokens, set);
}

py::dict FBeta(std::size_t tp, std::size_t fp, std::size_t fn, double beta) {
  const auto s = pb::metrics::FBeta({tp, fp, fn}, beta);
  py::dict d;
  d["tp"] = s.tp;
  d["fp"] = s.fp;
  d["fn"] = s.fn;
  d["beta"] = s.beta;
  d["precision"] = s.precision;
  d["recall"] = s.recall;
  d["fbeta"] = s.fbeta;
  return d;
}

double FleissKappa(const std::vector<std::vector<std::size_t>>& counts) {
  pb::metrics::RatingsMatrix m;
  m.counts = counts;
  return pb::metrics::FleissKappa(m);
}

std::optional<py::dict> Perturb(const std::string& text, const std::string& kinds,
                                std::uint64_t seed, double prob, std::size_t max_words,
                                double jaccard_min, const std::string& pair_id) {
  pb::perturb::PerturbationConfig cfg;
  cfg.kinds = pb::perturb::ParseCombo(kinds);
  cfg.seed = seed;
  cfg.prob_per_token = prob;
  cfg.max_affected_words = max_words;
  cfg.jaccard_min = jaccard_min;
  cfg.Validate();
  const auto out =
      pb::perturb::RunChain(text, cfg, pb::perturb::Lexicons::Bundled(), pair_id);
  if (!out.retained) return std::nullopt;
  py::dict d;
  d["id"] = out.pair.id;
  d["clean"] = out.pair.clean;
  d["corrupt"] = out.pair.corrupt;
  d["jaccard"] = out.pair.jaccard;
  d["combo"] = out.pair.combo_label;
  d["seed"] = out.pair.seed;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Native core of the perturbench toolkit";
  m.attr("__version__") = std::string(pb::kVersion);

  py::register_exception<pb::Error>(m, "Error", PyExc_RuntimeError);

  m.def("tokenize", [](const std::string& text) { return pb::text::Tokenize(text).tokens; },
        py::arg("text"));
  m.def("jaccard",
        [](const std::string& a, const std::string& b) {
          return pb::text::JaccardUnigram(pb::text::Tokenize(a), pb::text::Tokenize(b));
        },
        py::arg("a"), py::arg("b"));
  m.def("gleu", &Gleu, py::arg("source"), py::arg("references"), py::arg("hypothesis"),
        py::arg("iterations") = 500, py::arg("seed") = 0, py::arg("max_n") = 4);
  m.def("corpus_gleu", &CorpusGleu, py::arg("sources"), py::arg("references"),
        py::arg("hypotheses"), py::arg("iterations") = 500, py::arg("seed") = 0,
        py::arg("max_n") = 4, py::arg("jobs") = 1);
  m.def("extract_edits", &ExtractEdits, py::arg("source"), py::arg("corrected"));
  m.def("apply_edits", &ApplyEdits, py::arg("tokens"), py::arg("edits"));
  m.def("f_beta", &FBeta, py::arg("tp"), py::arg("fp"), py::arg("fn"), py::arg("beta") = 0.5);
  m.def("fleiss_kappa", &FleissKappa, py::arg("counts"));
  m.def("local_embed",
        [](const std::string& text, std::size_t dim) {
          return pb::embed::LocalEmbed(text, dim).components;
        },
        py::arg("text"), py::arg("dim") = 1024);
  m.def("cosine",
        [](const std::vector<double>& a, const std::vector<double>& b) {
          return pb::embed::Cosine(a, b);
        },
        py::arg("a"), py::arg("b"));
  m.def("perturb", &Perturb, py::arg("text"), py::arg("kinds"), py::arg("seed") = 0,
        py::arg("prob") = 0.30, py::arg("max_words") = 10, py::arg("jaccard_min") = 0.70,
        py::arg("pair_id") = "0");
}
