#include "germs/word.hpp"

#include <cctype>
#include <sstream>

namespace germs {

namespace {

void push_reduced(std::vector<Letter>& out, const Letter& l) {
  if (!out.empty() && out.back().name == l.name && out.back().exponent == -l.exponent) {
    out.pop_back();
  } else {
    out.push_back(l);
  }
}

}  // namespace

Word::Word(std::vector<Letter> letters) {
  for (const Letter& l : letters) {
    if (l.exponent != 1 && l.exponent != -1) throw WordParseError("exponent must be +1 or -1");
    push_reduced(letters_, l);
  }
}

Word Word::parse(std::string_view text) {
  std::vector<Letter> letters;
  std::istringstream in{std::string(text)};
  std::string tok;
  while (in >> tok) {
    Letter l;
    auto caret = tok.find('^');
    l.name = tok.substr(0, caret);
    if (caret != std::string::npos) {
      std::string e = tok.substr(caret + 1);
      if (e == "-1") l.exponent = -1;
      else if (e == "1") l.exponent = 1;
      else throw WordParseError("bad exponent in \"" + tok + "\"");
    }
    if (l.name.empty()) throw WordParseError("empty generator name in \"" + tok + "\"");
    for (char c : l.name)
      if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_'))
        throw WordParseError("bad generator name \"" + l.name + "\"");
    letters.push_back(std::move(l));
  }
  return Word(std::move(letters));
}

Word Word::inverse() const {
  Word w;
  w.letters_.reserve(letters_.size());
  for (auto it = letters_.rbegin(); it != letters_.rend(); ++it) w.letters_.push_back(it->inverse());
  return w;
}

std::string Word::str() const {
  std::string s;
  for (const Letter& l : letters_) {
    if (!s.empty()) s += ' ';
    s += l.name;
    if (l.exponent < 0) s += "^-1";
  }
  return s;
}

Word operator*(const Word& a, const Word& b) {
  Word w = a;
  for (const Letter& l : b.letters_) push_reduced(w.letters_, l);
  return w;
}

void for_each_word(const std::vector<std::string>& generators, int radius,
                   const std::function<void(const Word&)>& visit) {
  std::vector<Letter> alphabet;
  for (const auto& g : generators) {
    alphabet.push_back({g, 1});
    alphabet.push_back({g, -1});
  }
  std::vector<Word> level{Word()};
  visit(level.front());
  for (int len = 1; len <= radius; ++len) {
    std::vector<Word> next;
    for (const Word& w : level) {
      for (const Letter& l : alphabet) {
        if (!w.empty() && w.letters().back() == l.inverse()) continue;
        std::vector<Letter> ls = w.letters();
        ls.push_back(l);
        Word nw(std::move(ls));
        visit(nw);
        next.push_back(std::move(nw));
      }
    }
    level = std::move(next);
  }
}

std::vector<Word> word_ball(const std::vector<std::string>& generators, int radius) {
  std::vector<Word> out;
  for_each_word(generators, radius, [&](const Word& w) { out.push_back(w); });
  return out;
}

}  // namespace germs
