#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace germs {

class WordParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Letter {
  std::string name;
  int exponent = 1;  // +1 or -1
  Letter inverse() const { return Letter{name, -exponent}; }
  friend bool operator==(const Letter&, const Letter&) = default;
};

// Freely reduced word over named generators. Words act on the left:
// the word "f g" is f o g, so its last letter acts first.
class Word {
 public:
  Word() = default;
  explicit Word(std::vector<Letter> letters);  // reduces

  // Whitespace-separated names, each optionally suffixed "^-1" (or "^1").
  static Word parse(std::string_view text);
  static Word letter(std::string name, int exponent = 1) { return Word({Letter{std::move(name), exponent}}); }

  const std::vector<Letter>& letters() const { return letters_; }
  std::size_t length() const { return letters_.size(); }
  bool empty() const { return letters_.empty(); }

  Word inverse() const;
  std::string str() const;

  friend Word operator*(const Word& a, const Word& b);
  friend bool operator==(const Word&, const Word&) = default;
  friend bool operator<(const Word& a, const Word& b) { return a.str() < b.str(); }

 private:
  std::vector<Letter> letters_;
};

// All reduced words of length <= radius over `generators`, in shortlex order
// (by length, then letter order g1, g1^-1, g2, g2^-1, ...).
std::vector<Word> word_ball(const std::vector<std::string>& generators, int radius);

// Calls visit for each word of the ball in the same order, without storing.
void for_each_word(const std::vector<std::string>& generators, int radius,
                   const std::function<void(const Word&)>& visit);

}  // namespace germs
