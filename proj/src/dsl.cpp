#include "cdtc/dsl.hpp"

#include <charconv>
#include <set>
#include <sstream>
#include <utility>

namespace cdtc {
namespace {

enum class Tok { Word, String, Int, LBrace, RBrace, Colon, Star, Arrow, Comma, End };

struct Token {
  Tok kind = Tok::End;
  std::string text; // decoded value for strings, raw lexeme otherwise
  SourceSpan span;
};

std::string describe(const Token& t) {
  switch (t.kind) {
    case Tok::Word: return "'" + t.text + "'";
    case Tok::String: return "string";
    case Tok::Int: return "integer " + t.text;
    case Tok::LBrace: return "'{'";
    case Tok::RBrace: return "'}'";
    case Tok::Colon: return "':'";
    case Tok::Star: return "'*'";
    case Tok::Arrow: return "'->'";
    case Tok::Comma: return "','";
    case Tok::End: return "end of input";
  }
  return "token";
}

bool is_word_start(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; }
bool is_word_char(char c) { return is_word_start(c) || (c >= '0' && c <= '9') || c == '-'; }
bool is_digit(char c) { return c >= '0' && c <= '9'; }

class Lexer {
public:
  Lexer(std::string_view text, std::vector<Diagnostic>& diags) : text_(text), diags_(diags) {
    if (text_.substr(0, 3) == "\xEF\xBB\xBF") pos_ = 3;
  }

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_trivia();
      Token t;
      t.span.line = line_;
      t.span.column = column_;
      int start_column = column_;
      if (pos_ >= text_.size()) {
        t.kind = Tok::End;
        out.push_back(std::move(t));
        return out;
      }
      char c = text_[pos_];
      if (is_word_start(c)) {
        t.kind = Tok::Word;
        while (pos_ < text_.size() && is_word_char(text_[pos_])) t.text += advance();
      } else if (is_digit(c)) {
        t.kind = Tok::Int;
        while (pos_ < text_.size() && is_digit(text_[pos_])) t.text += advance();
      } else if (c == '"') {
        t.kind = Tok::String;
        lex_string(t);
      } else if (c == '-' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '>') {
        t.kind = Tok::Arrow;
        t.text = "->";
        advance();
        advance();
      } else {
        switch (c) {
          case '{': t.kind = Tok::LBrace; break;
          case '}': t.kind = Tok::RBrace; break;
          case ':': t.kind = Tok::Colon; break;
          case '*': t.kind = Tok::Star; break;
          case ',': t.kind = Tok::Comma; break;
          default: {
            std::string bad = advance_code_point();
            diags_.push_back({Severity::Error, std::string(codes::kUnexpectedCharacter),
                              "unexpected character '" + bad + "'",
                              SourceSpan{t.span.line, start_column, 1}});
            continue;
          }
        }
        t.text = std::string(1, advance());
      }
      t.span.length = column_ - start_column;
      out.push_back(std::move(t));
    }
  }

private:
  char advance() {
    char c = text_[pos_++];
    if (c == '\n') {
      ++line_;
      column_ = 1;
    } else if ((static_cast<unsigned char>(c) & 0xC0) != 0x80) {
      ++column_;
    }
    return c;
  }

  std::string advance_code_point() {
    std::string out(1, advance());
    while (pos_ < text_.size() && (static_cast<unsigned char>(text_[pos_]) & 0xC0) == 0x80) {
      out += text_[pos_++];
    }
    return out;
  }

  void skip_trivia() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
        advance();
      } else if (c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else {
        break;
      }
    }
  }

  void lex_string(Token& t) {
    int start_column = column_;
    advance(); // opening quote
    for (;;) {
      if (pos_ >= text_.size() || text_[pos_] == '\n' || text_[pos_] == '\r') {
        diags_.push_back({Severity::Error, std::string(codes::kBadString),
                          "unterminated string literal",
                          SourceSpan{t.span.line, start_column, column_ - start_column}});
        return;
      }
      char c = text_[pos_];
      if (c == '"') {
        advance();
        return;
      }
      if (c == '\\') {
        int escape_column = column_;
        advance();
        if (pos_ < text_.size() && (text_[pos_] == '"' || text_[pos_] == '\\')) {
          t.text += advance();
        } else {
          diags_.push_back({Severity::Error, std::string(codes::kBadString),
                            "invalid escape sequence; only \\\" and \\\\ are allowed",
                            SourceSpan{line_, escape_column, 2}});
        }
        continue;
      }
      t.text += advance_code_point();
    }
  }

  std::string_view text_;
  std::vector<Diagnostic>& diags_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int column_ = 1;
};

class Parser {
public:
  Parser(std::vector<Token> tokens, std::vector<Diagnostic>& diags, SourceMap& map)
      : toks_(std::move(tokens)), diags_(diags), map_(map) {}

  std::optional<Course> run() {
    Course course;
    if (at(Tok::End)) {
      error(codes::kSyntax, "expected 'course' declaration", peek().span);
      return std::nullopt;
    }
    try {
      if (!at_word("course")) {
        if (at(Tok::Word)) fail(codes::kUnknownKeyword, "unknown keyword " + describe(peek()) +
                                                            "; expected 'course'",
                                peek().span);
        fail(codes::kSyntax, "expected 'course', found " + describe(peek()), peek().span);
      }
      take();
      if (!at(Tok::String) && !at(Tok::Word)) {
        fail(codes::kSyntax, "expected course id, found " + describe(peek()), peek().span);
      }
      const Token& id = take();
      check_identifier(id, "course id");
      course.id = id.text;
      const Token& open = expect(Tok::LBrace, "'{'");
      std::set<std::string> module_ids;
      bool title_seen = false;
      block(open, [&] {
        const Token& kw = expect_word("a course declaration");
        if (kw.text == "title") {
          set_once(title_seen, kw, course.title, expect_field_string());
        } else if (kw.text == "ila_ref") {
          expect_field_int();
          warning(codes::kIgnoredMeta, "ila_ref belongs on modules; ignored on course", kw.span);
        } else if (kw.text == "module") {
          parse_module(course, module_ids);
        } else {
          unknown_keyword(kw, "course");
        }
      });
    } catch (const Abort&) {
      return std::nullopt;
    }
    while (!at(Tok::End)) {
      if (at(Tok::RBrace)) {
        error(codes::kUnbalancedBraces, "unmatched '}'", take().span);
      } else {
        error(codes::kSyntax, "unexpected " + describe(peek()) + " after course block",
              peek().span);
        break;
      }
    }
    if (has_errors(diags_)) return std::nullopt;
    return course;
  }

private:
  struct Abort {};

  const Token& peek() const { return toks_[pos_]; }
  const Token& take() {
    const Token& t = toks_[pos_];
    if (t.kind != Tok::End) ++pos_;
    return t;
  }
  bool at(Tok kind) const { return peek().kind == kind; }
  bool at_word(std::string_view w) const { return at(Tok::Word) && peek().text == w; }

  void error(std::string_view code, std::string message, SourceSpan span) {
    diags_.push_back({Severity::Error, std::string(code), std::move(message), span});
  }
  void warning(std::string_view code, std::string message, SourceSpan span) {
    diags_.push_back({Severity::Warning, std::string(code), std::move(message), span});
  }
  [[noreturn]] void fail(std::string_view code, std::string message, SourceSpan span) {
    error(code, std::move(message), span);
    throw Abort{};
  }
  [[noreturn]] void unknown_keyword(const Token& kw, std::string_view where) {
    fail(codes::kUnknownKeyword, "unknown keyword '" + kw.text + "' in " + std::string(where),
         kw.span);
  }

  const Token& expect(Tok kind, std::string_view what) {
    if (!at(kind)) {
      fail(codes::kSyntax, "expected " + std::string(what) + ", found " + describe(peek()),
           peek().span);
    }
    return take();
  }
  const Token& expect_word(std::string_view what) { return expect(Tok::Word, what); }

  std::string expect_field_string() {
    expect(Tok::Colon, "':'");
    return expect(Tok::String, "string").text;
  }

  int expect_field_int() {
    expect(Tok::Colon, "':'");
    const Token& t = expect(Tok::Int, "integer");
    int value = 0;
    auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), value);
    if (ec != std::errc{} || ptr != t.text.data() + t.text.size()) {
      error(codes::kInvalidValue, "integer " + t.text + " is out of range", t.span);
      return 0;
    }
    last_int_span_ = t.span;
    return value;
  }

  int expect_positive_int(std::string_view field) {
    int value = expect_field_int();
    if (value < 1) {
      error(codes::kInvalidValue, std::string(field) + " must be a positive integer",
            last_int_span_);
      return 1;
    }
    return value;
  }

  template <typename T>
  void set_once(bool& seen, const Token& kw, T& slot, T value) {
    if (seen) {
      error(codes::kDuplicateField, "field '" + kw.text + "' given more than once", kw.span);
      return;
    }
    seen = true;
    slot = std::move(value);
  }

  void check_identifier(const Token& t, std::string_view what) {
    if (!is_identifier(t.text)) {
      error(codes::kInvalidValue,
            std::string(what) + " '" + t.text + "' must match [a-z][a-z0-9-]*", t.span);
    }
  }

  void check_unique(std::set<std::string>& seen, const Token& id, std::string_view what) {
    if (!seen.insert(id.text).second) {
      error(codes::kDuplicateId, "duplicate " + std::string(what) + " id '" + id.text + "'",
            id.span);
    }
  }

  void unclosed(const Token& open) {
    if (eof_reported_) return;
    eof_reported_ = true;
    error(codes::kUnbalancedBraces, "'{' is never closed", open.span);
  }

  void skip_to_block_end(const Token& open) {
    int depth = 0;
    for (;;) {
      if (at(Tok::End)) {
        unclosed(open);
        return;
      }
      const Token& t = take();
      if (t.kind == Tok::LBrace) {
        ++depth;
      } else if (t.kind == Tok::RBrace) {
        if (depth == 0) return;
        --depth;
      }
    }
  }

  template <typename F>
  void block(const Token& open, F&& statement) {
    while (!at(Tok::RBrace) && !at(Tok::End)) {
      try {
        statement();
      } catch (const Abort&) {
        skip_to_block_end(open);
        return;
      }
    }
    if (at(Tok::End)) {
      unclosed(open);
      return;
    }
    take();
  }

  void parse_module(Course& course, std::set<std::string>& module_ids) {
    const Token& id = expect_word("module id");
    check_identifier(id, "module id");
    check_unique(module_ids, id, "module");
    LearningModule module;
    module.id = id.text;
    map_[module.id] = id.span;
    const Token& open = expect(Tok::LBrace, "'{'");
    std::set<std::string> item_ids;
    bool title_seen = false;
    bool ila_seen = false;
    block(open, [&] {
      const Token& kw = expect_word("a module declaration");
      if (kw.text == "title") {
        set_once(title_seen, kw, module.title, expect_field_string());
      } else if (kw.text == "ila_ref") {
        int ref = expect_field_int();
        if (ref < kMinIlaRef || ref > kMaxIlaRef) {
          error(codes::kInvalidValue, "ila_ref must be between 1 and 21", last_int_span_);
        }
        std::optional<int> value = ref;
        set_once(ila_seen, kw, module.ila_ref, value);
      } else if (kw.text == "item") {
        parse_item(module, item_ids);
      } else {
        unknown_keyword(kw, "module");
      }
    });
    if (module.items.empty()) {
      warning(codes::kEmptyModule, "module '" + module.id + "' has no items", id.span);
    }
    course.modules.push_back(std::move(module));
  }

  void parse_item(LearningModule& module, std::set<std::string>& item_ids) {
    const Token& kind = expect_word("content type");
    auto type = parse_content_type(kind.text);
    if (!type) {
      fail(codes::kUnknownKeyword,
           "unknown content type '" + kind.text + "'; expected fact, concept, procedure or principle",
           kind.span);
    }
    const Token& id = expect_word("item id");
    check_identifier(id, "item id");
    check_unique(item_ids, id, "item");
    ContentItem item;
    item.id = id.text;
    item.content_type = *type;
    std::string path = module.id + "/" + item.id;
    map_[path] = id.span;
    const Token& open = expect(Tok::LBrace, "'{'");
    std::set<std::string> assessment_ids;
    bool body_seen = false;
    block(open, [&] {
      const Token& kw = expect_word("an item declaration");
      if (kw.text == "body") {
        set_once(body_seen, kw, item.body, expect_field_string());
      } else if (kw.text == "objective") {
        parse_objective(item, path);
      } else if (kw.text == "assess") {
        parse_assessment(item, path, assessment_ids);
      } else {
        unknown_keyword(kw, "item");
      }
    });
    if (!body_seen) {
      error(codes::kMissingField, "item '" + item.id + "' is missing 'body'", id.span);
    }
    module.items.push_back(std::move(item));
  }

  PerformanceLevel expect_level(ContentType owner, std::string_view what) {
    const Token& t = expect_word("performance level");
    auto level = parse_performance_level(t.text);
    if (!level) {
      fail(codes::kUnknownKeyword,
           "unknown performance level '" + t.text + "'; expected remember, use or find", t.span);
    }
    if (!is_legal_cell(owner, *level)) {
      error(codes::kIllegalCell,
            std::string(what) + " at level '" + t.text + "' is not legal for a " +
                std::string(to_string(owner)) + " item; facts admit only remember",
            t.span);
    }
    return *level;
  }

  void parse_objective(ContentItem& item, const std::string& path) {
    SourceSpan at_span = toks_[pos_ - 1].span;
    Objective objective;
    objective.level = expect_level(item.content_type, "objective");
    const Token& open = expect(Tok::LBrace, "'{'");
    bool given = false, arranged = false, behavior = false, criteria = false;
    block(open, [&] {
      const Token& kw = expect_word("an objective field");
      if (kw.text == "given") {
        set_once(given, kw, objective.given, expect_field_string());
      } else if (kw.text == "arranged") {
        std::optional<std::string> value = expect_field_string();
        set_once(arranged, kw, objective.arranged, std::move(value));
      } else if (kw.text == "behavior") {
        set_once(behavior, kw, objective.behavior, expect_field_string());
      } else if (kw.text == "criteria") {
        set_once(criteria, kw, objective.criteria, expect_field_string());
      } else {
        unknown_keyword(kw, "objective");
      }
    });
    map_[path + "/objective#" + std::to_string(item.objectives.size())] = at_span;
    item.objectives.push_back(std::move(objective));
  }

  void parse_assessment(ContentItem& item, const std::string& path,
                        std::set<std::string>& assessment_ids) {
    AssessmentItem a;
    a.level = expect_level(item.content_type, "assessment");
    const Token& kind_token = expect_word("assessment kind");
    auto kind = parse_assessment_kind(kind_token.text);
    if (!kind) {
      fail(codes::kUnknownKeyword,
           "unknown assessment kind '" + kind_token.text +
               "'; expected mcq, classify, order or task",
           kind_token.span);
    }
    switch (*kind) {
      case AssessmentKind::Mcq: a.payload = McqPayload{}; break;
      case AssessmentKind::Classify: a.payload = ClassifyPayload{}; break;
      case AssessmentKind::Order: a.payload = OrderPayload{}; break;
      case AssessmentKind::Task: a.payload = TaskPayload{}; break;
    }
    const Token& id = expect_word("assessment id");
    check_identifier(id, "assessment id");
    check_unique(assessment_ids, id, "assessment");
    a.id = id.text;
    map_[path + "/" + a.id] = id.span;
    const Token& open = expect(Tok::LBrace, "'{'");
    bool stem = false, categories = false, limit = false, interval = false, points = false;
    block(open, [&] {
      const Token& kw = expect_word("an assessment field");
      const std::string& f = kw.text;
      if (f == "stem") {
        set_once(stem, kw, a.stem, expect_field_string());
      } else if (f == "option" && *kind == AssessmentKind::Mcq) {
        McqOption option;
        if (at(Tok::Star)) {
          take();
          option.correct = true;
        }
        option.text = expect_field_string();
        std::get<McqPayload>(a.payload).options.push_back(std::move(option));
      } else if (f == "categories" && *kind == AssessmentKind::Classify) {
        expect(Tok::Colon, "':'");
        std::vector<std::string> list{expect(Tok::String, "string").text};
        while (at(Tok::Comma)) {
          take();
          list.push_back(expect(Tok::String, "string").text);
        }
        set_once(categories, kw, std::get<ClassifyPayload>(a.payload).categories,
                 std::move(list));
      } else if (f == "entry" && *kind == AssessmentKind::Classify) {
        ClassifyEntry entry;
        entry.text = expect_field_string();
        expect(Tok::Arrow, "'->'");
        entry.category = expect(Tok::String, "string").text;
        std::get<ClassifyPayload>(a.payload).entries.push_back(std::move(entry));
      } else if (f == "step" && *kind == AssessmentKind::Order) {
        std::get<OrderPayload>(a.payload).steps.push_back(expect_field_string());
      } else if (a.is_timed() && f == "time_limit") {
        set_once(limit, kw, a.time_limit_seconds, expect_positive_int(f));
      } else if (a.is_timed() && f == "penalty_interval") {
        set_once(interval, kw, a.penalty_interval_seconds, expect_positive_int(f));
      } else if (a.is_timed() && f == "penalty_points") {
        set_once(points, kw, a.penalty_points, expect_positive_int(f));
      } else {
        fail(codes::kUnknownKeyword,
             "field '" + f + "' is not valid in a " + std::string(to_string(*kind)) +
                 " assessment",
             kw.span);
      }
    });
    if (!stem) {
      error(codes::kMissingField, "assessment '" + a.id + "' is missing 'stem'", id.span);
    }
    item.assessments.push_back(std::move(a));
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::vector<Diagnostic>& diags_;
  SourceMap& map_;
  SourceSpan last_int_span_;
  bool eof_reported_ = false;
};

class Writer {
public:
  void line(int depth, const std::string& text) {
    out_.append(static_cast<std::size_t>(depth) * 2, ' ');
    out_ += text;
    out_ += '\n';
  }
  std::string take() { return std::move(out_); }

private:
  std::string out_;
};

void render_assessment(Writer& w, const AssessmentItem& a) {
  w.line(3, "assess " + std::string(to_string(a.level)) + " " +
                std::string(to_string(a.kind())) + " " + a.id + " {");
  w.line(4, "stem: " + quote_dsl_string(a.stem));
  std::visit(
      [&](const auto& payload) {
        using P = std::decay_t<decltype(payload)>;
        if constexpr (std::is_same_v<P, McqPayload>) {
          for (const auto& o : payload.options) {
            w.line(4, std::string(o.correct ? "option*: " : "option: ") + quote_dsl_string(o.text));
          }
        } else if constexpr (std::is_same_v<P, ClassifyPayload>) {
          if (!payload.categories.empty()) {
            std::string list;
            for (const auto& c : payload.categories) {
              if (!list.empty()) list += ", ";
              list += quote_dsl_string(c);
            }
            w.line(4, "categories: " + list);
          }
          for (const auto& e : payload.entries) {
            w.line(4, "entry: " + quote_dsl_string(e.text) + " -> " + quote_dsl_string(e.category));
          }
        } else if constexpr (std::is_same_v<P, OrderPayload>) {
          for (const auto& s : payload.steps) w.line(4, "step: " + quote_dsl_string(s));
        }
      },
      a.payload);
  if (a.is_timed()) {
    if (a.time_limit_seconds != kDefaultTimeLimitSeconds) {
      w.line(4, "time_limit: " + std::to_string(a.time_limit_seconds));
    }
    if (a.penalty_interval_seconds != kDefaultPenaltyIntervalSeconds) {
      w.line(4, "penalty_interval: " + std::to_string(a.penalty_interval_seconds));
    }
    if (a.penalty_points != kDefaultPenaltyPoints) {
      w.line(4, "penalty_points: " + std::to_string(a.penalty_points));
    }
  }
  w.line(3, "}");
}

} // namespace

ParseResult parse_course(std::string_view text) {
  ParseResult result;
  auto tokens = Lexer(text, result.diagnostics).run();
  result.course = Parser(std::move(tokens), result.diagnostics, result.source_map).run();
  return result;
}

std::string quote_dsl_string(std::string_view text) {
  std::string out = "\"";
  for (char c : text) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  out += '"';
  return out;
}

std::string render_canonical(const Course& course) {
  Writer w;
  w.line(0, "course " + quote_dsl_string(course.id) + " {");
  if (!course.title.empty()) w.line(1, "title: " + quote_dsl_string(course.title));
  for (const auto& m : course.modules) {
    w.line(1, "module " + m.id + " {");
    if (!m.title.empty()) w.line(2, "title: " + quote_dsl_string(m.title));
    if (m.ila_ref) w.line(2, "ila_ref: " + std::to_string(*m.ila_ref));
    for (const auto& item : m.items) {
      w.line(2, "item " + std::string(to_string(item.content_type)) + " " + item.id + " {");
      w.line(3, "body: " + quote_dsl_string(item.body));
      for (const auto& o : item.objectives) {
        w.line(3, "objective " + std::string(to_string(o.level)) + " {");
        w.line(4, "given: " + quote_dsl_string(o.given));
        if (o.arranged) w.line(4, "arranged: " + quote_dsl_string(*o.arranged));
        w.line(4, "behavior: " + quote_dsl_string(o.behavior));
        w.line(4, "criteria: " + quote_dsl_string(o.criteria));
        w.line(3, "}");
      }
      for (const auto& a : item.assessments) render_assessment(w, a);
      w.line(2, "}");
    }
    w.line(1, "}");
  }
  w.line(0, "}");
  return w.take();
}

} // namespace cdtc
