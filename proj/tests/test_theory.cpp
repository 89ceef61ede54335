#include "doctest.h"
#include "oracle.hpp"

#include "ltlfsynth/spec.hpp"
#include "ltlfsynth/theory.hpp"

using namespace lsynth;
using namespace lsynth::testing;

namespace {

Fo F(const std::string& text, Theory th = Theory::LRA) {
    Scope sc;
    sc.theory = th;
    sc.auto_declare = true;
    return parse_fo(read_sexpr(text), sc);
}

Key K(const char* n) { return cur_key(intern_var(n)); }
Key PK_(const char* n) { return pre_key(intern_var(n)); }

}  // namespace

TEST_CASE("LRA elimination on the running example") {
    // forall x. (x >= 0 and x - pre x <= 2) -> pre y > x
    Fo f = F("(forall ((x real)) (implies (and (>= x 0) (<= (- x (pre x)) 2)) (> (pre y) x)))");
    Fo r = qe(Theory::LRA, f);
    CHECK(f_quantifier_free(r));
    CHECK(equiv(Theory::LRA, r, F("(or (> (pre y) (+ (pre x) 2)) (< (pre x) -2))")));
    CHECK(f_size(r) <= 5);

    CHECK(f_is_true(qe(Theory::LRA, F("(exists ((y real)) (> y x))"))));
    CHECK(is_valid(Theory::LRA, F("(forall ((x real)) (exists ((y real)) (> y x)))")));
    CHECK(!is_sat(Theory::LRA, F("(forall ((x real)) (= y x))")));
    CHECK(equiv(Theory::LRA, F("(= x y)"), F("(= y x)")));
}

TEST_CASE("LIA elimination") {
    Fo f = F("(exists ((x int)) (= (* 2 x) a))", Theory::LIA);
    Fo r = qe(Theory::LIA, f);
    CHECK(f_quantifier_free(r));
    CHECK(equiv(Theory::LIA, r, F("(equiv 2 a 0)", Theory::LIA)));
    for (int a = -10; a <= 10; ++a) {
        bool want = false;
        for (int x = -20; x <= 20; ++x) want = want || 2 * x == a;
        CHECK(f_eval(r, [&](Key) { return std::optional<Q>(Q(a)); }) == want);
    }
    // strictness matters over the integers only
    Fo gap = F("(exists ((x int)) (and (< y x) (< x (+ y 1))))", Theory::LIA);
    CHECK(f_is_false(qe(Theory::LIA, gap)));
    Fo gapr = F("(exists ((x real)) (and (< y x) (< x (+ y 1))))");
    CHECK(f_is_true(qe(Theory::LRA, gapr)));
    CHECK(!is_sat(Theory::LIA, F("(and (equiv 2 x 0) (equiv 2 (+ x 1) 0))", Theory::LIA)));
    CHECK(is_valid(Theory::LIA, F("(or (< x 2) (>= x 2))", Theory::LIA)));
}

TEST_CASE("LIA normal form tightens bounds") {
    Fo a = normalize(Theory::LIA, F("(< x 2)", Theory::LIA));
    Fo b = normalize(Theory::LIA, F("(<= x 1)", Theory::LIA));
    CHECK(f_struct_eq(a, b));
    Fo c = normalize(Theory::LIA, F("(>= x 2)", Theory::LIA));
    CHECK(f_struct_eq(c, f_not(b)));
    CHECK(f_is_false(normalize(Theory::LIA, F("(= (* 2 x) 1)", Theory::LIA))));
    CHECK(f_struct_eq(normalize(Theory::LIA, F("(<= (* 2 x) 3)", Theory::LIA)), b));
}

TEST_CASE("simplify") {
    Fo f = F("(or (and (>= x 0) (< x 0)) (> y 1))");
    CHECK(f_struct_eq(simplify(Theory::LRA, f), F("(> y 1)")));
    CHECK(f_is_true(simplify(Theory::LRA, F("(or (> x 0) (<= x 0))"))));
    CHECK(f_is_true(simplify(Theory::LRA, F("(or (> x 0) (< x 1))"))));
    CHECK(f_is_false(simplify(Theory::LRA, F("(and (> x 1) (< x 0))"))));
    // implied literal dropped
    CHECK(f_struct_eq(simplify(Theory::LRA, F("(and (> x 1) (> x 0))")), F("(> x 1)")));

    Rng r(11);
    std::vector<Key> vars{K("x"), K("y")};
    for (Theory th : {Theory::LRA, Theory::LIA}) {
        for (int i = 0; i < 250; ++i) {
            QeInstance inst = random_qe_instance(r, th, vars);
            Fo g = qe(th, inst.f);  // quantifier-free material to simplify
            Fo raw = f_or(g, f_and(g, F("(> x 0)", th)));
            Fo s = simplify(th, raw);
            CHECK(equiv(th, raw, s));
            CHECK(f_size(s) <= f_size(raw));
        }
    }
}

TEST_CASE("witness") {
    Key py = PK_("y"), x = K("x");
    Fo f = F("(> (pre y) x)");
    auto w = witness(Theory::LRA, f, {{x, Q(3)}});
    REQUIRE(w);
    CHECK(w->at(py) == Q(4));
    auto t = witness(Theory::LRA, f_true(), {}, {K("y"), K("z")});
    REQUIRE(t);
    CHECK(t->at(K("y")) == 0);
    CHECK(t->at(K("z")) == 0);
    CHECK(!witness(Theory::LRA, F("(and (> y x) (< y x))"), {}));

    auto m = witness(Theory::LRA, F("(and (> y 1) (< y 2) (> z y))"), {});
    REQUIRE(m);
    CHECK(m->at(K("y")) > 1);
    CHECK(m->at(K("y")) < 2);
    CHECK(m->at(K("z")) > m->at(K("y")));

    Rng r(5);
    std::vector<Key> vars{K("x"), K("y"), K("z")};
    int found = 0;
    for (Theory th : {Theory::LRA, Theory::LIA}) {
        for (int i = 0; i < 200; ++i) {
            Fo g = qe(th, random_qe_instance(r, th, vars).f);
            auto a = witness(th, g, {}, {K("x")});
            CHECK(a.has_value() == is_sat(th, g));
            if (!a) continue;
            ++found;
            CHECK(f_eval(g, [&](Key k) { return std::optional<Q>(a->at(k)); }));
            if (th == Theory::LIA)
                for (auto& [k, v] : *a) CHECK(is_int(v));
        }
    }
    CHECK(found > 50);
}

TEST_CASE("QE agrees with brute force: LIA box") {
    Rng r(2024);
    std::vector<Key> vars{K("a"), K("b"), K("c")};
    int conclusive = 0;
    for (int i = 0; i < 300; ++i) {
        QeInstance inst = random_qe_instance(r, Theory::LIA, vars);
        bool inc = false;
        bool ok = check_qe_instance(Theory::LIA, inst, &inc);
        CHECK_MESSAGE(ok, f_sexpr(inst.f, Theory::LIA));
        if (!inc) ++conclusive;
    }
    CHECK(conclusive >= 290);
}

TEST_CASE("QE agrees with brute force: LRA grid") {
    Rng r(99);
    std::vector<Key> vars{K("a"), K("b"), K("c")};
    for (int i = 0; i < 300; ++i) {
        QeInstance inst = random_qe_instance(r, Theory::LRA, vars);
        CHECK_MESSAGE(check_qe_instance(Theory::LRA, inst), f_sexpr(inst.f));
    }
}

TEST_CASE("MC and IPC closure of elimination") {
    Rng r(17);
    std::set<Q> Kc{Q(0), Q(2), Q(5)};
    std::vector<Key> vars{K("a"), K("b"), K("c")};
    auto mc_atom = [&](std::vector<Key> scope) {
        Key a = scope[r.uni(0, 2)], b = scope[r.uni(0, 2)];
        LinExpr e = LinExpr::var(a);
        if (a != b && r.coin())
            e = e - LinExpr::var(b);
        else
            e.add_constant(-Q(*std::next(Kc.begin(), r.uni(0, 2))));
        static const Cmp cs[] = {Cmp::Eq, Cmp::Neq, Cmp::Lt, Cmp::Le, Cmp::Gt, Cmp::Ge};
        return f_lit(make_cmp(cs[r.uni(0, 5)], e));
    };
    auto ipc_atom = [&](std::vector<Key> scope) {
        Key a = scope[r.uni(0, 2)], b = scope[r.uni(0, 2)];
        int kind = r.uni(0, 3);
        LinExpr e = LinExpr::var(a);
        if (kind == 0 && a != b) return f_lit(make_cmp(Cmp::Eq, e - LinExpr::var(b)));
        if (kind == 1) {
            if (a != b) e = e - LinExpr::var(b);
            e.add_constant(Q(-r.uni(0, 2)));
            return f_lit(make_mod(Z(r.coin() ? 2 : 3), e));
        }
        e.add_constant(-Q(*std::next(Kc.begin(), r.uni(0, 2))));
        static const Cmp cs[] = {Cmp::Eq, Cmp::Neq, Cmp::Lt, Cmp::Gt};
        return f_lit(make_cmp(cs[r.uni(0, 3)], e));
    };
    for (int round = 0; round < 2; ++round) {
        bool mc = round == 0;
        Theory th = mc ? Theory::LRA : Theory::LIA;
        for (int i = 0; i < 100; ++i) {
            std::function<Fo(int)> gen = [&](int d) -> Fo {
                if (d == 0 || r.uni(0, 2) == 0) return mc ? mc_atom(vars) : ipc_atom(vars);
                return r.coin() ? f_and(gen(d - 1), gen(d - 1)) : f_or(gen(d - 1), gen(d - 1));
            };
            Fo body = gen(3);
            Fo f = r.coin() ? f_exists({vars[2]}, body) : f_forall({vars[2]}, body);
            if (r.coin()) f = f_exists({vars[1]}, f);
            Fo out = qe(th, f);
            if (mc)
                CHECK_MESSAGE(fo_in_mc(th, out, Kc), f_str(out));
            else
                CHECK_MESSAGE(fo_in_ipc(out, Kc, Z(6)), f_str(out));
        }
    }
}

TEST_CASE("atom shapes") {
    auto lit = [](const char* s, Theory th) {
        std::vector<Lit> ls;
        f_literals(F(s, th), ls);
        return ls.at(0);
    };
    CHECK(atom_shape(lit("(< x y)", Theory::LRA).atom).mc);
    CHECK(!atom_shape(lit("(< x y)", Theory::LRA).atom).ipc);
    CHECK(atom_shape(lit("(= x y)", Theory::LIA).atom).ipc);
    CHECK(!atom_shape(lit("(< x (+ y 1))", Theory::LRA).atom).mc);
    CHECK(atom_shape(lit("(equiv 3 y 0)", Theory::LIA).atom).ipc);
    CHECK(atom_shape(lit("(equiv 3 x (+ y 1))", Theory::LIA).atom).ipc);
    CHECK(!atom_shape(lit("(equiv 4 x (* 2 y))", Theory::LIA).atom).ipc);
    CHECK(*atom_shape(lit("(<= (* 2 x) 5)", Theory::LRA).atom).constant == Q(5, 2));
}
