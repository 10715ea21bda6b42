#include "fmp/pomdp_io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>
#include <vector>

namespace fmp {

namespace {

constexpr int kWildcard = -1;

struct Line {
  int number = 0;
  std::vector<std::string> tokens;
};

// Splits into whitespace-separated tokens, treating ':' as its own token and
// stripping '#' comments.
std::vector<std::string> tokenize(const std::string& raw) {
  std::vector<std::string> tokens;
  std::string current;
  for (char c : raw) {
    if (c == '#') break;
    if (std::isspace(static_cast<unsigned char>(c)) || c == ':') {
      if (!current.empty()) {
        tokens.push_back(current);
        current.clear();
      }
      if (c == ':') tokens.emplace_back(":");
    } else {
      current.push_back(c);
    }
  }
  if (!current.empty()) tokens.push_back(current);
  return tokens;
}

std::optional<double> parse_number(const std::string& token) {
  const char* begin = token.data();
  const char* end = begin + token.size();
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc{} || ptr != end) return std::nullopt;
  return value;
}

std::optional<long> parse_integer(const std::string& token) {
  const char* begin = token.data();
  const char* end = begin + token.size();
  long value = 0;
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc{} || ptr != end) return std::nullopt;
  return value;
}

class Parser {
 public:
  Parser(std::istream& in, const PomdpParseOptions& options) : options_(options) {
    std::string raw;
    int number = 0;
    while (std::getline(in, raw)) {
      ++number;
      auto tokens = tokenize(raw);
      if (!tokens.empty()) lines_.push_back({number, std::move(tokens)});
    }
  }

  PomdpModel run() {
    while (pos_ < lines_.size()) dispatch();
    finalize();
    return std::move(model_);
  }

 private:
  const Line& line() const { return lines_[pos_]; }
  int line_number() const { return pos_ < lines_.size() ? lines_[pos_].number : last_line_; }

  void dispatch() {
    const auto& tokens = line().tokens;
    const std::string& head = tokens[0];
    last_line_ = line().number;
    if (head == "discount") parse_discount();
    else if (head == "values") parse_values();
    else if (head == "states") declared_states_ = parse_name_list(state_names_);
    else if (head == "actions") declared_actions_ = parse_name_list(action_names_);
    else if (head == "observations") declared_observations_ = parse_name_list(observation_names_);
    else if (head == "T") parse_transition();
    else if (head == "O") parse_observation();
    else if (head == "R") parse_reward();
    else throw SyntaxError(line().number, "unknown directive '" + head + "'");
  }

  void expect_colon(std::size_t index) {
    if (index >= line().tokens.size() || line().tokens[index] != ":")
      throw SyntaxError(line().number, "expected ':'");
  }

  void parse_discount() {
    const auto& tokens = line().tokens;
    expect_colon(1);
    if (tokens.size() != 3) throw SyntaxError(line().number, "expected 'discount: <number>'");
    const auto value = parse_number(tokens[2]);
    if (!value) throw SyntaxError(line().number, "bad discount '" + tokens[2] + "'");
    if (!(*value >= 0.0 && *value < 1.0))
      throw SemanticError("discount must lie in [0, 1)", line().number);
    model_.discount = *value;
    have_discount_ = true;
    ++pos_;
  }

  void parse_values() {
    const auto& tokens = line().tokens;
    expect_colon(1);
    if (tokens.size() != 3) throw SyntaxError(line().number, "expected 'values: reward'");
    if (tokens[2] != "reward")
      throw SemanticError("only 'values: reward' is supported", line().number);
    values_reward_ = true;
    ++pos_;
  }

  // `states: 4` or `states: up down left right`
  int parse_name_list(std::vector<std::string>& names) {
    const auto& tokens = line().tokens;
    expect_colon(1);
    if (tokens.size() < 3) throw SyntaxError(line().number, "empty declaration");
    int count;
    if (tokens.size() == 3 && parse_integer(tokens[2])) {
      count = static_cast<int>(*parse_integer(tokens[2]));
      if (count <= 0) throw SemanticError("count must be positive", line().number);
    } else {
      names.assign(tokens.begin() + 2, tokens.end());
      count = static_cast<int>(names.size());
    }
    ++pos_;
    return count;
  }

  void require_dimensions() {
    if (declared_states_ <= 0 || declared_actions_ <= 0 || declared_observations_ <= 0)
      throw SemanticError("states/actions/observations must be declared before the model body",
                          line().number);
    if (!allocated_) {
      model_.num_states = declared_states_;
      model_.num_actions = declared_actions_;
      model_.num_observations = declared_observations_;
      model_.allocate();
      model_.state_names = state_names_;
      model_.action_names = action_names_;
      model_.observation_names = observation_names_;
      allocated_ = true;
    }
  }

  int resolve(const std::string& token, const std::vector<std::string>& names, int count,
              const char* kind) {
    if (token == "*") return kWildcard;
    if (const auto idx = parse_integer(token)) {
      if (*idx < 0 || *idx >= count)
        throw SemanticError(std::string(kind) + " index " + token + " out of range",
                            line().number);
      return static_cast<int>(*idx);
    }
    const auto it = std::find(names.begin(), names.end(), token);
    if (it == names.end())
      throw SemanticError("undeclared " + std::string(kind) + " '" + token + "'",
                          line().number);
    return static_cast<int>(it - names.begin());
  }

  int resolve_action(const std::string& t) {
    return resolve(t, action_names_, declared_actions_, "action");
  }
  int resolve_state(const std::string& t) {
    return resolve(t, state_names_, declared_states_, "state");
  }
  int resolve_observation(const std::string& t) {
    return resolve(t, observation_names_, declared_observations_, "observation");
  }

  std::vector<int> expand(int index, int count) {
    if (index != kWildcard) return {index};
    std::vector<int> all(count);
    for (int i = 0; i < count; ++i) all[i] = i;
    return all;
  }

  // Reads `count` numbers from the next line, or the keyword `uniform`.
  std::vector<double> read_row(int count) {
    ++pos_;
    if (pos_ >= lines_.size())
      throw SyntaxError(last_line_, "expected a probability row after this line");
    const auto& tokens = line().tokens;
    last_line_ = line().number;
    if (tokens.size() == 1 && tokens[0] == "uniform")
      return std::vector<double>(count, 1.0 / count);
    if (static_cast<int>(tokens.size()) != count)
      throw SyntaxError(line().number, "expected " + std::to_string(count) + " entries, got " +
                                           std::to_string(tokens.size()));
    std::vector<double> row(count);
    for (int i = 0; i < count; ++i) {
      const auto v = parse_number(tokens[i]);
      if (!v) throw SyntaxError(line().number, "bad probability '" + tokens[i] + "'");
      row[i] = *v;
    }
    return row;
  }

  void parse_transition() {
    require_dimensions();
    const auto& tokens = line().tokens;
    expect_colon(1);
    if (tokens.size() < 3) throw SyntaxError(line().number, "incomplete T line");
    const int a = resolve_action(tokens[2]);
    if (tokens.size() == 3) {
      // `T: <a>` followed by a full matrix, `uniform`, or `identity`
      if (pos_ + 1 < lines_.size() && lines_[pos_ + 1].tokens.size() == 1 &&
          (lines_[pos_ + 1].tokens[0] == "uniform" || lines_[pos_ + 1].tokens[0] == "identity")) {
        const bool identity = lines_[pos_ + 1].tokens[0] == "identity";
        for (int s : expand(a, declared_actions_))
          for (int i = 0; i < declared_states_; ++i)
            for (int j = 0; j < declared_states_; ++j)
              model_.transition_at(s, i, j) =
                  identity ? (i == j ? 1.0 : 0.0) : 1.0 / declared_states_;
        pos_ += 2;
        last_line_ = lines_[pos_ - 1].number;
        return;
      }
      std::vector<std::vector<double>> matrix;
      for (int i = 0; i < declared_states_; ++i) matrix.push_back(read_row(declared_states_));
      for (int aa : expand(a, declared_actions_))
        for (int i = 0; i < declared_states_; ++i)
          for (int j = 0; j < declared_states_; ++j) model_.transition_at(aa, i, j) = matrix[i][j];
      ++pos_;
      return;
    }
    expect_colon(3);
    if (tokens.size() < 5) throw SyntaxError(line().number, "incomplete T line");
    const int s = resolve_state(tokens[4]);
    if (tokens.size() == 5) {
      // `T: <a> : <s>` followed by one row
      const auto row = read_row(declared_states_);
      for (int aa : expand(a, declared_actions_))
        for (int ss : expand(s, declared_states_))
          for (int j = 0; j < declared_states_; ++j) model_.transition_at(aa, ss, j) = row[j];
      ++pos_;
      return;
    }
    expect_colon(5);
    if (tokens.size() != 8) throw SyntaxError(line().number, "expected 'T: a : s : s2 p'");
    const int s2 = resolve_state(tokens[6]);
    const auto p = parse_number(tokens[7]);
    if (!p) throw SyntaxError(line().number, "bad probability '" + tokens[7] + "'");
    for (int aa : expand(a, declared_actions_))
      for (int ss : expand(s, declared_states_))
        for (int tt : expand(s2, declared_states_)) model_.transition_at(aa, ss, tt) = *p;
    ++pos_;
  }

  void parse_observation() {
    require_dimensions();
    const auto& tokens = line().tokens;
    expect_colon(1);
    if (tokens.size() < 3) throw SyntaxError(line().number, "incomplete O line");
    resolve_action(tokens[2]);  // accepted and ignored: Z depends on s' only
    if (tokens.size() == 3) {
      if (pos_ + 1 < lines_.size() && lines_[pos_ + 1].tokens.size() == 1 &&
          lines_[pos_ + 1].tokens[0] == "uniform") {
        for (int i = 0; i < declared_states_; ++i)
          for (int o = 0; o < declared_observations_; ++o)
            model_.observation_at(i, o) = 1.0 / declared_observations_;
        pos_ += 2;
        last_line_ = lines_[pos_ - 1].number;
        return;
      }
      for (int i = 0; i < declared_states_; ++i) {
        const auto row = read_row(declared_observations_);
        for (int o = 0; o < declared_observations_; ++o) model_.observation_at(i, o) = row[o];
      }
      ++pos_;
      return;
    }
    expect_colon(3);
    if (tokens.size() < 5) throw SyntaxError(line().number, "incomplete O line");
    const int s2 = resolve_state(tokens[4]);
    if (tokens.size() == 5) {
      const auto row = read_row(declared_observations_);
      for (int ss : expand(s2, declared_states_))
        for (int o = 0; o < declared_observations_; ++o) model_.observation_at(ss, o) = row[o];
      ++pos_;
      return;
    }
    expect_colon(5);
    if (tokens.size() != 8) throw SyntaxError(line().number, "expected 'O: a : s2 : o p'");
    const int o = resolve_observation(tokens[6]);
    const auto p = parse_number(tokens[7]);
    if (!p) throw SyntaxError(line().number, "bad probability '" + tokens[7] + "'");
    for (int ss : expand(s2, declared_states_))
      for (int oo : expand(o, declared_observations_)) model_.observation_at(ss, oo) = *p;
    ++pos_;
  }

  void parse_reward() {
    require_dimensions();
    const auto& tokens = line().tokens;
    // R: <a> : <s> : * : * <r>      (start-state expected-reward convention)
    expect_colon(1);
    if (tokens.size() != 10 || tokens[3] != ":" || tokens[5] != ":" || tokens[7] != ":")
      throw SyntaxError(line().number, "expected 'R: a : s : * : * r'");
    const int a = resolve_action(tokens[2]);
    const int s = resolve_state(tokens[4]);
    if (tokens[6] != "*" || tokens[8] != "*")
      throw SemanticError(
          "only start-state rewards 'R: a : s : * : *' are supported (means over next "
          "state and observation)",
          line().number);
    const auto r = parse_number(tokens[9]);
    if (!r) throw SyntaxError(line().number, "bad reward '" + tokens[9] + "'");
    for (int aa : expand(a, declared_actions_))
      for (int ss : expand(s, declared_states_)) model_.reward_at(ss, aa) = *r;
    saw_reward_ = true;
    ++pos_;
  }

  void finalize() {
    if (!have_discount_) throw SemanticError("missing 'discount:' header");
    if (!allocated_) require_dimensions();

    if (options_.normalize_rewards) {
      if (!values_reward_)
        throw SemanticError("reward normalization requires a 'values: reward' header");
      double lo = model_.expected_reward.front(), hi = lo;
      for (double r : model_.expected_reward) {
        lo = std::min(lo, r);
        hi = std::max(hi, r);
      }
      const double span = hi - lo;
      for (double& r : model_.expected_reward) r = span > 0.0 ? (r - lo) / span : 0.0;
      model_.reward_max = 1.0;
    } else {
      double hi = 0.0;
      for (double r : model_.expected_reward) hi = std::max(hi, r);
      model_.reward_max = options_.reward_max.value_or(hi > 0.0 ? hi : 1.0);
      for (std::size_t i = 0; i < model_.expected_reward.size(); ++i) {
        const double r = model_.expected_reward[i];
        if (r < 0.0 || r > model_.reward_max) {
          std::ostringstream os;
          os << "reward " << r << " for (s=" << i / model_.num_actions
             << ", a=" << i % model_.num_actions << ") outside [0, " << model_.reward_max
             << "]; pass normalize_rewards to rescale";
          throw RangeError(os.str());
        }
      }
    }

    const ValidationReport report = validate_model(model_);
    if (!report.ok()) {
      const auto& v = report.violations.front();
      throw SemanticError(v.where + ": " + v.what);
    }
    (void)saw_reward_;
  }

  PomdpParseOptions options_;
  std::vector<Line> lines_;
  std::size_t pos_ = 0;
  int last_line_ = 0;

  PomdpModel model_;
  std::vector<std::string> state_names_, action_names_, observation_names_;
  int declared_states_ = 0, declared_actions_ = 0, declared_observations_ = 0;
  bool have_discount_ = false;
  bool values_reward_ = false;
  bool allocated_ = false;
  bool saw_reward_ = false;
};

void append_number(std::string& out, double v) {
  char buf[32];
  snprintf(buf, sizeof(buf), "%.17g", v);
  out += buf;
}

}  // namespace

PomdpModel load_pomdp_text(std::istream& in, const PomdpParseOptions& options) {
  return Parser(in, options).run();
}

PomdpModel load_pomdp_string(const std::string& text, const PomdpParseOptions& options) {
  std::istringstream in(text);
  return load_pomdp_text(in, options);
}

PomdpModel load_pomdp_file(const std::string& path, const PomdpParseOptions& options) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  return load_pomdp_text(in, options);
}

std::string serialize_pomdp_text(const PomdpModel& model) {
  std::string out;
  out += "discount: ";
  append_number(out, model.discount);
  out += "\nvalues: reward\nstates: " + std::to_string(model.num_states);
  out += "\nactions: " + std::to_string(model.num_actions);
  out += "\nobservations: " + std::to_string(model.num_observations);
  out += "\n";
  for (int a = 0; a < model.num_actions; ++a) {
    out += "T: " + std::to_string(a) + "\n";
    for (int s = 0; s < model.num_states; ++s) {
      for (int s2 = 0; s2 < model.num_states; ++s2) {
        if (s2) out += ' ';
        append_number(out, model.transition_at(a, s, s2));
      }
      out += '\n';
    }
  }
  out += "O: *\n";
  for (int s2 = 0; s2 < model.num_states; ++s2) {
    for (int o = 0; o < model.num_observations; ++o) {
      if (o) out += ' ';
      append_number(out, model.observation_at(s2, o));
    }
    out += '\n';
  }
  for (int a = 0; a < model.num_actions; ++a)
    for (int s = 0; s < model.num_states; ++s) {
      if (model.reward_at(s, a) == 0.0) continue;
      out += "R: " + std::to_string(a) + " : " + std::to_string(s) + " : * : * ";
      append_number(out, model.reward_at(s, a));
      out += '\n';
    }
  return out;
}

}  // namespace fmp
