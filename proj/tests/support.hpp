#pragma once

#include <cstdint>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "multippl/parser.hpp"
#include "multippl/typecheck.hpp"

namespace multippl::testing {

inline std::string program_path(const std::string& name) {
  return std::string(MULTIPPL_PROGRAMS_DIR) + "/" + name + ".mppl";
}

inline std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline std::string corpus_source(const std::string& name) { return read_text(program_path(name)); }

inline TypedProgram checked(const std::string& source) { return check(parse(source)); }

inline TypedProgram corpus(const std::string& name) { return checked(corpus_source(name)); }

inline const std::vector<std::string>& corpus_names() {
  static const std::vector<std::string> names = {
      "coin_disjunction", "sampled_guard",  "biased_coins", "repeated_boundary", "reachability_4",
      "reachability_9",   "arrival_tree15", "gossip4",      "ret_true",
  };
  return names;
}

inline const std::vector<std::string>& enumerable_corpus() {
  static const std::vector<std::string> names = {
      "coin_disjunction", "sampled_guard", "repeated_boundary", "reachability_4", "reachability_9", "ret_true",
  };
  return names;
}

/// Random programs in the enumerable fragment: at most 6 flips, 2 observes
/// and 2 boundaries. Half of them have an exact main, the rest sample a
/// coin first and hand it to an exact block. Without boundaries every
/// program is a plain exact block.
class ProgramGenerator {
 public:
  explicit ProgramGenerator(std::uint64_t seed, bool with_boundaries = true)
      : rng_(seed), with_boundaries_(with_boundaries) {}

  std::string next() {
    flips_ = observes_ = 0;
    boundaries_ = with_boundaries_ ? 0 : 2;
    vars_.clear();
    return !with_boundaries_ || coin(0.5) ? disc_main() : cont_main();
  }

 private:
  std::mt19937_64 rng_;
  bool with_boundaries_;
  int flips_ = 0, observes_ = 0, boundaries_ = 0;
  std::vector<std::string> vars_;

  bool coin(double p) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng_) < p; }
  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }

  std::string prob() {
    static const char* ps[] = {"0.1", "0.25", "0.3", "0.5", "0.6", "0.75", "0.9", "1.0 / 3.0"};
    return ps[pick(8)];
  }

  std::string atom() { return vars_[static_cast<std::size_t>(pick(static_cast<int>(vars_.size())))]; }

  std::string formula(int depth) {
    if (depth == 0 || coin(0.35)) return coin(0.25) ? "!" + atom() : atom();
    const std::string op = coin(0.5) ? " && " : " || ";
    return "(" + formula(depth - 1) + op + formula(depth - 1) + ")";
  }

  std::string fresh() { return "X" + std::to_string(vars_.size()); }

  std::string binding() {
    const int choice = pick(5);
    if (vars_.empty() || choice == 0) {
      ++flips_;
      return "flip " + prob();
    }
    if (choice == 1 && flips_ + 2 <= 6) {
      flips_ += 2;
      if (observes_ < 2 && coin(0.4)) {
        ++observes_;
        return "if " + formula(1) + " { observe " + formula(1) + " in flip " + prob() + " } else { flip " + prob() +
               " }";
      }
      return "if " + formula(1) + " then flip " + prob() + " else flip " + prob();
    }
    if (choice == 2 && boundaries_ < 2) {
      ++boundaries_;
      return "sample { y ~ flip(" + prob() + "); z <- exact(" + atom() + "); ret y " + (coin(0.5) ? "&&" : "||") +
             " z }";
    }
    if (choice == 3 && flips_ + 2 <= 6) {
      flips_ += 2;
      return "discrete(0.2, 0.5, 0.3) == " + std::to_string(pick(3));
    }
    return formula(2);
  }

  std::string exact_body(int lets, bool with_sample) {
    std::ostringstream out;
    if (with_sample) {
      out << "  let S = sample(x) in\n";
      vars_.push_back("S");
    }
    for (int i = 0; i < lets && flips_ < 6; ++i) {
      const std::string rhs = binding();
      const std::string name = fresh();
      out << "  let " << name << " = " << rhs << " in\n";
      vars_.push_back(name);
      if (observes_ < 2 && coin(0.3)) {
        ++observes_;
        out << "  observe " << formula(1) << " in\n";
      }
    }
    return out.str();
  }

  std::string disc_main() {
    std::ostringstream out;
    out << "exact {\n" << exact_body(2 + pick(4), false);
    if (coin(0.5)) {
      out << "  ret (" << atom() << ", " << formula(1) << ")\n}\n";
    } else {
      out << "  ret " << formula(1) << "\n}\n";
    }
    return out.str();
  }

  std::string cont_main() {
    std::ostringstream out;
    ++boundaries_;
    out << "sample {\n  x ~ flip(" << prob() << ");\n  v <- exact {\n";
    out << exact_body(1 + pick(3), true);
    out << "  ret " << formula(1) << "\n  };\n";
    if (coin(0.5)) out << "  observe(v, flip(" << prob() << "));\n";
    out << "  ret (x, v)\n}\n";
    return out.str();
  }
};

}  // namespace multippl::testing
