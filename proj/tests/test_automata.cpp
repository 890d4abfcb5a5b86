#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "graylearn/automata.hpp"
#include "graylearn/automata_io.hpp"

using namespace graylearn;

TEST(Transducer, EvaluatesRunningExample) {
  const Transducer m = fixtures::tau_abc();
  EXPECT_EQ(evaluate(m, "a"), "");
  EXPECT_EQ(evaluate(m, "acc"), "11");
  EXPECT_EQ(evaluate(m, "bc"), "1");
  EXPECT_EQ(evaluate(m, "bccc"), "111");
  EXPECT_FALSE(evaluate(m, "b"));
  EXPECT_FALSE(evaluate(m, ""));
  EXPECT_FALSE(evaluate(m, "ca"));
  EXPECT_THROW(evaluate(m, "ad"), std::invalid_argument);
}

TEST(Transducer, InitialProductionAndFinalOutput) {
  Transducer m(Alphabet("a"), Alphabet("xy"));
  m.add_state();
  m.set_initial(0, "x");
  m.set_transition(0, 'a', 0, "y");
  m.set_final(0, "xx");
  EXPECT_EQ(evaluate(m, ""), "xxx");
  EXPECT_EQ(evaluate(m, "aa"), "xyyxx");
  const graylearn::Run r = run(m, "a");
  EXPECT_EQ(r.state, 0u);
  EXPECT_EQ(r.output, "xy");
}

TEST(Transducer, RejectsOutputOutsideAlphabet) {
  Transducer m(Alphabet("a"), Alphabet("x"));
  m.add_state();
  EXPECT_THROW(m.set_transition(0, 'a', 0, "z"), std::invalid_argument);
  EXPECT_THROW(m.set_transition(0, 'a', 3, "x"), std::out_of_range);
}

TEST(Transducer, TrimDropsUselessStates) {
  Transducer m = fixtures::tau_abc();
  const StateId dead = m.add_state();
  m.set_transition(0, 'c', dead, "1");
  const StateId unreachable = m.add_state();
  m.set_final(unreachable, "");
  const Transducer t = trim(m);
  EXPECT_EQ(t.num_states(), 3u);
  for (const Word& u : fixtures::words_up_to(Alphabet("abc"), 6)) EXPECT_EQ(evaluate(t, u), evaluate(m, u)) << u;
}

TEST(Transducer, TrimOfEmptyFunctionIsEmpty) {
  Transducer m(Alphabet("a"), Alphabet("x"));
  m.add_state();
  m.set_transition(0, 'a', 0, "x");
  EXPECT_TRUE(trim(m).is_empty());
}

TEST(Transducer, ProductRestrictImplementsRestriction) {
  const Transducer id = fixtures::identity(Alphabet("ab"));
  const auto langs = fixtures::identity_languages();
  const Dfa& mod3 = langs.front().dfa;
  const Transducer p = product_restrict(id, mod3);
  for (const Word& u : fixtures::words_up_to(Alphabet("ab"), 7)) {
    if (mod3.accepts(u))
      EXPECT_EQ(evaluate(p, u), u);
    else
      EXPECT_FALSE(evaluate(p, u)) << u;
  }
}

TEST(Dfa, MissingTransitionsGoToSink) {
  const Dfa up = fixtures::up_abc();
  EXPECT_EQ(up.num_states(), 4u);
  EXPECT_TRUE(up.accepts("a"));
  EXPECT_TRUE(up.accepts("bccc"));
  EXPECT_FALSE(up.accepts("b"));
  EXPECT_FALSE(up.accepts("ab"));
  EXPECT_FALSE(up.accepts(""));
  EXPECT_TRUE(Dfa::universal(Alphabet("ab")).accepts("abba"));
  EXPECT_FALSE(Dfa::empty_language(Alphabet("ab")).accepts(""));
}

TEST(AutomataIo, RoundTrip) {
  const Transducer m = fixtures::tau_abc();
  EXPECT_EQ(parse_transducer(print_transducer(m)), m);
  const Dfa d = fixtures::up_abc();
  EXPECT_EQ(parse_dfa(print_dfa(d)), d);
}

TEST(AutomataIo, DataFilesParse) {
  const Transducer m = load_transducer(GRAYLEARN_DATA "/tau_abc.trans");
  const Dfa up = load_dfa(GRAYLEARN_DATA "/up_abc.dfa");
  for (const Word& u : fixtures::words_up_to(Alphabet("abc"), 6)) {
    EXPECT_EQ(evaluate(m, u), evaluate(fixtures::tau_abc(), u));
    EXPECT_EQ(up.accepts(u), fixtures::up_abc().accepts(u));
  }
}

TEST(AutomataIo, ErrorsCarryLineNumbers) {
  const char* text = "alphabets ab 01\nstates 1\ninit 0 _\ntrans 0 a 2 0\n";
  try {
    parse_transducer(text);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 4u);
  }
  EXPECT_THROW(parse_transducer("states 1\n"), ParseError);
  EXPECT_THROW(parse_dfa("alphabet ab\nstates 1\ninit 0\ntrans 0 c 0\n"), ParseError);
  EXPECT_THROW(parse_dfa("alphabet ab\nstates x\n"), ParseError);
  EXPECT_THROW(load_dfa("/nonexistent/file.dfa"), std::runtime_error);
}
