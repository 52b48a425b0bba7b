// Copyright 2026 The ittmlab Authors
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

#include "ittm/assembly.hpp"

#include <fstream>
#include <map>
#include <sstream>

namespace ittm {
namespace {

struct Token {
  std::string text;
  std::size_t column = 0;
};

std::vector<Token> tokenize(std::string_view line) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    if (line[i] == '#') break;
    if (line[i] == ' ' || line[i] == '\t' || line[i] == '\r') {
      ++i;
      continue;
    }
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r' && line[i] != '#') ++i;
    out.push_back(Token{std::string(line.substr(start, i - start)), start + 1});
  }
  return out;
}

struct PendingRule {
  std::size_t line;
  Token state, pattern, next, write, move;
};

struct StateRef {
  Token name;
  std::size_t line = 0;
};

class Assembler {
 public:
  Program run(std::string_view text) {
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
      const std::size_t end = std::min(text.find('\n', pos), text.size());
      ++line_no;
      line(tokenize(text.substr(pos, end - pos)), line_no);
      pos = end + 1;
    }
    return finish();
  }

 private:
  void line(const std::vector<Token>& tok, std::size_t ln) {
    if (tok.empty()) return;
    const std::string& head = tok[0].text;
    if (head[0] == '.') {
      directive(tok, ln);
      return;
    }
    if (tok.size() != 6 || tok[2].text != "->") {
      throw ParseError("expected 'STATE PATTERN -> STATE WRITE MOVE'", ln, tok[0].column);
    }
    rules_.push_back(PendingRule{ln, tok[0], tok[1], tok[3], tok[4], tok[5]});
  }

  void directive(const std::vector<Token>& tok, std::size_t ln) {
    const std::string& d = tok[0].text;
    const auto one_arg = [&]() -> const Token& {
      if (tok.size() != 2) throw ParseError(d + " takes one argument", ln, tok[0].column);
      return tok[1];
    };
    if (d == ".tapes") {
      const Token& t = one_arg();
      if (t.text == "1") {
        p_.tape_count = 1;
      } else if (t.text == "3") {
        p_.tape_count = 3;
      } else {
        throw ParseError("tape count must be 1 or 3", ln, t.column);
      }
      if (!rules_.empty()) throw ParseError(".tapes must precede the rules", ln, tok[0].column);
    } else if (d == ".states") {
      if (tok.size() < 2) throw ParseError(".states needs at least one name", ln, tok[0].column);
      for (std::size_t i = 1; i < tok.size(); ++i) {
        if (declared_.count(tok[i].text)) throw ParseError("state '" + tok[i].text + "' declared twice", ln, tok[i].column);
        declared_[tok[i].text] = static_cast<StateId>(p_.states.size());
        declared_at_.push_back(StateRef{tok[i], ln});
        p_.states.push_back(tok[i].text);
      }
    } else if (d == ".start" || d == ".halt" || d == ".limit" || d == ".query" || d == ".resume") {
      const Token& t = one_arg();
      roles_[d] = StateRef{t, ln};
    } else if (d == ".variant") {
      const Token& t = one_arg();
      try {
        p_.variant = parse_variant(t.text);
      } catch (const Error& e) {
        throw ParseError(e.what(), ln, t.column);
      }
    } else {
      throw ParseError("unknown directive " + d, ln, tok[0].column);
    }
  }

  StateId resolve(const Token& t, std::size_t ln) const {
    auto it = declared_.find(t.text);
    if (it == declared_.end()) throw ParseError("undeclared state '" + t.text + "'", ln, t.column);
    return it->second;
  }

  std::optional<StateId> role(const std::string& d, bool required) const {
    auto it = roles_.find(d);
    if (it == roles_.end()) {
      if (required) throw ParseError("missing " + d + " directive", 1, 1);
      return std::nullopt;
    }
    return resolve(it->second.name, it->second.line);
  }

  void check_bits(const Token& t, std::size_t ln, const char* what) const {
    if (t.text.size() != static_cast<std::size_t>(p_.tape_count)) {
      throw ParseError(std::string("bad ") + what + " '" + t.text + "': expected " + std::to_string(p_.tape_count) +
                           " characters",
                       ln, t.column);
    }
    for (std::size_t i = 0; i < t.text.size(); ++i) {
      const char c = t.text[i];
      if (c != '0' && c != '1' && c != '*') {
        throw ParseError(std::string("bad ") + what + " '" + t.text + "'", ln, t.column + i);
      }
    }
  }

  Program finish() {
    if (p_.states.empty()) throw ParseError("missing .states directive", 1, 1);
    p_.start = *role(".start", true);
    p_.halt = *role(".halt", true);
    p_.limit = role(".limit", false);
    p_.query = role(".query", false);
    p_.resume = role(".resume", false);
    if (p_.query.has_value() != p_.resume.has_value()) {
      throw ParseError(".query and .resume must be given together", roles_.count(".query") ? roles_[".query"].line : roles_[".resume"].line, 1);
    }
    if (p_.query && p_.tape_count != 3) throw ParseError("oracle queries need 3 tapes", roles_[".query"].line, 1);
    if (!p_.limit && p_.variant != LimitVariant::LiminfInstruction) {
      throw ParseError("missing .limit directive", 1, 1);
    }
    p_.table.assign(p_.states.size() * p_.pattern_count(), std::nullopt);
    std::vector<std::size_t> rule_line(p_.table.size(), 0);
    for (const auto& r : rules_) {
      const StateId s = resolve(r.state, r.line);
      const StateId next = resolve(r.next, r.line);
      check_bits(r.pattern, r.line, "read pattern");
      check_bits(r.write, r.line, "write pattern");
      if (s == p_.halt || (p_.query && s == *p_.query)) {
        throw ParseError("state '" + r.state.text + "' cannot have rules", r.line, r.state.column);
      }
      Rule rule;
      rule.next = next;
      for (int t = 0; t < p_.tape_count; ++t) {
        const char c = r.write.text[t];
        rule.write[t] = c == '*' ? kKeep : static_cast<std::int8_t>(c - '0');
      }
      if (r.move.text == "L") {
        rule.move = Move::Left;
      } else if (r.move.text == "R") {
        rule.move = Move::Right;
      } else {
        throw ParseError("move must be L or R", r.line, r.move.column);
      }
      for (unsigned pat = 0; pat < p_.pattern_count(); ++pat) {
        if (!matches(r.pattern.text, pat)) continue;
        auto& slot = p_.rule(s, pat);
        if (slot) {
          throw ParseError("duplicate rule for (" + r.state.text + ", " + pattern_text(pat) + "), first given on line " +
                               std::to_string(rule_line[s * p_.pattern_count() + pat]),
                           r.line, r.pattern.column);
        }
        slot = rule;
        rule_line[s * p_.pattern_count() + pat] = r.line;
      }
    }
    for (StateId s = 0; s < p_.states.size(); ++s) {
      if (s == p_.halt || (p_.query && s == *p_.query)) continue;
      for (unsigned pat = 0; pat < p_.pattern_count(); ++pat) {
        if (!p_.rule(s, pat)) {
          const auto& at = declared_at_[s];
          throw ParseError("no rule for (" + p_.states[s] + ", " + pattern_text(pat) + ")", at.line, at.name.column);
        }
      }
    }
    p_.validate();
    return p_;
  }

  bool matches(const std::string& pattern, unsigned pat) const {
    for (int t = 0; t < p_.tape_count; ++t) {
      const unsigned bit = (pat >> (p_.tape_count - 1 - t)) & 1u;
      if (pattern[t] != '*' && static_cast<unsigned>(pattern[t] - '0') != bit) return false;
    }
    return true;
  }

  std::string pattern_text(unsigned pat) const {
    std::string s;
    for (int t = 0; t < p_.tape_count; ++t) s += ((pat >> (p_.tape_count - 1 - t)) & 1u) ? '1' : '0';
    return s;
  }

  Program p_;
  std::map<std::string, StateId> declared_;
  std::vector<StateRef> declared_at_;
  std::map<std::string, StateRef> roles_;
  std::vector<PendingRule> rules_;
};

}  // namespace

Program parse_program(std::string_view text) { return Assembler().run(text); }

std::string serialize_program(const Program& p) {
  std::ostringstream out;
  out << ".tapes " << p.tape_count << "\n.states";
  for (const auto& s : p.states) out << ' ' << s;
  out << "\n.start " << p.states[p.start] << "\n.halt " << p.states[p.halt] << '\n';
  if (p.limit) out << ".limit " << p.states[*p.limit] << '\n';
  if (p.query) out << ".query " << p.states[*p.query] << "\n.resume " << p.states[*p.resume] << '\n';
  out << ".variant " << to_string(p.variant) << '\n';
  for (StateId s = 0; s < p.states.size(); ++s) {
    for (unsigned pat = 0; pat < p.pattern_count(); ++pat) {
      const auto& r = p.rule(s, pat);
      if (!r) continue;
      out << p.states[s] << ' ';
      for (int t = 0; t < p.tape_count; ++t) out << (((pat >> (p.tape_count - 1 - t)) & 1u) ? '1' : '0');
      out << " -> " << p.states[r->next] << ' ';
      for (int t = 0; t < p.tape_count; ++t) out << (r->write[t] == kKeep ? '*' : static_cast<char>('0' + r->write[t]));
      out << ' ' << (r->move == Move::Left ? 'L' : 'R') << '\n';
    }
  }
  return out.str();
}

Program load_program(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return parse_program(buf.str());
  } catch (const ParseError& e) {
    throw Error(path + ":" + e.what());
  }
}

}  // namespace ittm
