// Copyright (c) 2026 The vexp authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdint>
#include <stdexcept>

#include "vexp/errors.hpp"
#include "vexp/field.hpp"

using namespace vexp;

TEST_CASE("primality oracle") {
  CHECK(is_prime_u64(2));
  CHECK(is_prime_u64(3));
  CHECK(is_prime_u64(7));
  CHECK(is_prime_u64(97));
  CHECK(is_prime_u64(1000003));
  CHECK(is_prime_u64(2147483647ULL));
  CHECK(is_prime_u64(1108855441ULL));
  CHECK(is_prime_u64(1152921504606859327ULL));

  CHECK_FALSE(is_prime_u64(0));
  CHECK_FALSE(is_prime_u64(1));
  CHECK_FALSE(is_prime_u64(4));
  CHECK_FALSE(is_prime_u64(561));         // Carmichael
  CHECK_FALSE(is_prime_u64(1001));        // 7*11*13
  CHECK_FALSE(is_prime_u64(3215031751ULL));  // strong pseudoprime to 2,3,5,7
  CHECK_FALSE(is_prime_u64(1000003ULL * 1000003ULL));
}

TEST_CASE("field construction validates parameters") {
  CHECK(Field::prime(7).modulus() == 7);
  CHECK(Field::prime(7).kind() == FieldKind::prime);
  CHECK(Field::prime(7).exact());

  CHECK_THROWS_AS(Field::prime(6), CompositeModulus);
  CHECK_THROWS_AS(Field::prime(1), CompositeModulus);
  CHECK_THROWS_AS(Field::prime(2), CompositeModulus);  // too small to be useful
  CHECK_THROWS_AS(Field::prime(std::uint64_t{1} << 62), CompositeModulus);

  CHECK(Field::rational().exact());

  CHECK(Field::complex_fp().tolerance() == doctest::Approx(1e-9));
  CHECK_FALSE(Field::complex_fp().exact());
  CHECK_THROWS_AS(Field::complex_fp(0.0), BadTolerance);
  CHECK_THROWS_AS(Field::complex_fp(-1e-9), BadTolerance);
  CHECK_THROWS_AS(Field::complex_fp(1.5), BadTolerance);
}

TEST_CASE("prime field arithmetic") {
  Field f = Field::prime(7);
  Value a = f.from_integer(3);
  Value b = f.from_integer(5);

  CHECK(f.format(f.add(a, b)) == "1");
  CHECK(f.format(f.sub(a, b)) == "5");
  CHECK(f.format(f.mul(a, b)) == "1");
  CHECK(f.format(f.neg(a)) == "4");
  CHECK(f.format(f.inverse(a)) == "5");
  CHECK(f.format(f.div(f.one(), a)) == "5");
  CHECK(f.is_one(f.mul(a, f.inverse(a))));
  CHECK(f.is_zero(f.add(a, f.neg(a))));
  CHECK(f.format(f.from_integer(-3)) == "4");

  CHECK_THROWS_AS(f.inverse(f.zero()), DivisionByZero);
  CHECK_THROWS_AS(f.div(a, f.zero()), DivisionByZero);
}

TEST_CASE("prime field arithmetic near the 62-bit cap") {
  Field f = Field::prime(1152921504606859327ULL);
  Value x = f.from_integer(-1);
  CHECK(f.format(x) == "1152921504606859326");
  CHECK(f.is_one(f.mul(x, x)));  // (-1)^2
  Value y = f.parse("987654321987654321");
  CHECK(f.is_one(f.mul(y, f.inverse(y))));
  CHECK(f.equals(f.pow_oracle(y, 3), f.mul(y, f.mul(y, y))));
}

TEST_CASE("pow oracle") {
  Field f = Field::prime(7);
  CHECK(f.format(f.pow_oracle(f.from_integer(3), 6)) == "1");  // Fermat
  CHECK(f.format(f.pow_oracle(f.from_integer(4), 2)) == "2");
  CHECK(f.is_one(f.pow_oracle(f.zero(), 0)));  // 0^0 = 1 by convention
  CHECK(f.is_zero(f.pow_oracle(f.zero(), 5)));

  Field q = Field::rational();
  CHECK(q.format(q.pow_oracle(q.parse("2/3"), 3)) == "8/27");

  Field c = Field::complex_fp();
  Value i = c.parse("0,1");
  CHECK(c.equals(c.pow_oracle(i, 2), c.from_integer(-1)));
}

TEST_CASE("rational field arithmetic and canonical form") {
  Field f = Field::rational();
  Value third = f.parse("1/3");
  Value sixth = f.parse("1/6");
  CHECK(f.format(f.add(third, sixth)) == "1/2");
  CHECK(f.format(f.inverse(f.parse("2/3"))) == "3/2");
  CHECK(f.format(f.parse("-3/6")) == "-1/2");
  CHECK(f.format(f.from_integer(25)) == "25");  // integers carry no denominator
  CHECK(f.format(f.neg(f.parse("4/8"))) == "-1/2");
  CHECK_THROWS_AS(f.inverse(f.zero()), DivisionByZero);
}

TEST_CASE("prime field parse reduces residues") {
  Field f = Field::prime(7);
  CHECK(f.format(f.parse("12")) == "5");
  CHECK(f.format(f.parse("-1")) == "6");
  CHECK(f.format(f.parse("0")) == "0");
  CHECK_THROWS_AS(f.parse("abc"), BadEncoding);
  CHECK_THROWS_AS(f.parse(""), BadEncoding);
  CHECK_THROWS_AS(f.parse("1.5"), BadEncoding);
}

TEST_CASE("rational parse rejects malformed input") {
  Field f = Field::rational();
  CHECK_THROWS_AS(f.parse("1/0"), BadEncoding);
  CHECK_THROWS_AS(f.parse("3/-4"), BadEncoding);
  CHECK_THROWS_AS(f.parse("1/"), BadEncoding);
  CHECK_THROWS_AS(f.parse(""), BadEncoding);
  CHECK_THROWS_AS(f.parse("x/y"), BadEncoding);
}

TEST_CASE("complex parse and format round-trip") {
  Field f = Field::complex_fp();
  Value v = f.parse("0.1,-2.5");
  CHECK(f.parse(f.format(v)) == v);  // shortest round-trip encoding
  CHECK(f.parse("2") == f.from_integer(2));  // bare real means zero imaginary
  Value odd = f.parse("0.30000000000000004,1e-300");
  CHECK(f.parse(f.format(odd)) == odd);
  CHECK_THROWS_AS(f.parse("nan,0"), BadEncoding);
  CHECK_THROWS_AS(f.parse("inf,0"), BadEncoding);
  CHECK_THROWS_AS(f.parse("1,2,3"), BadEncoding);
  CHECK_THROWS_AS(f.parse("pear"), BadEncoding);
}

TEST_CASE("complex equality uses relative tolerance") {
  Field f = Field::complex_fp(1e-9);
  Value one = f.one();
  CHECK(f.equals(one, f.parse("1.0000000000001")));
  CHECK_FALSE(f.equals(one, f.parse("1.000001")));
  // Near zero the bound degrades to an absolute tolerance.
  CHECK(f.equals(f.zero(), f.parse("1e-12")));
  CHECK_FALSE(f.equals(f.zero(), f.parse("1e-6")));
  // Large magnitudes scale the bound.
  CHECK(f.equals(f.parse("1e20"), f.parse("1.00000000001e20")));
}

TEST_CASE("exact equality is structural") {
  Field f = Field::rational();
  CHECK(f.equals(f.parse("2/4"), f.parse("1/2")));
  CHECK_FALSE(f.equals(f.parse("1/2"), f.parse("1/3")));
  Field p = Field::prime(97);
  CHECK(p.equals(p.parse("98"), p.one()));
}

TEST_CASE("values from a different backend are rejected") {
  Field p = Field::prime(7);
  Value rational_value{mpq_class(1)};
  CHECK_THROWS_AS(p.add(rational_value, p.one()), std::invalid_argument);
  CHECK_THROWS_AS(p.format(rational_value), std::invalid_argument);
}

TEST_CASE("magnitude") {
  Field p = Field::prime(7);
  CHECK(p.magnitude(p.zero()) == 0.0);
  CHECK(p.magnitude(p.from_integer(3)) == 1.0);
  Field c = Field::complex_fp();
  CHECK(c.magnitude(c.parse("3,4")) == doctest::Approx(5.0));
}

TEST_CASE("descriptor equality") {
  CHECK(FieldDescriptor::prime(7) == FieldDescriptor::prime(7));
  CHECK_FALSE(FieldDescriptor::prime(7) == FieldDescriptor::prime(11));
  CHECK_FALSE(FieldDescriptor::prime(7) == FieldDescriptor::rational());
  CHECK(Field::complex_fp(1e-6).descriptor() == FieldDescriptor::complex_fp(1e-6));
}
