// Copyright 2026 The brlab Authors
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

#pragma once

#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace brlab {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// "num/den" in lowest terms; integers render as "n/1".
std::string to_string(const Rational& q);
Rational rational_from_string(const std::string& s);

BigInt factorial(int n);
BigInt binomial(int n, int k);

double log_factorial(double n);
double log_binomial(double n, double k);

// log(exp(a) + exp(b)) without overflow.
double log_add(double a, double b);

}  // namespace brlab
