// Copyright 2026 The genesyn Authors.
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

#include <algorithm>
#include <array>
#include <limits>

#include "genesyn/dsl.hpp"
#include "genesyn/error.hpp"

namespace genesyn::dsl {
namespace {

using S = Signature;
using F = Family;
using L = Lambda;

constexpr std::array<OperationDescriptor, kNumOps> kTable = {{
    {OpId(1), "ACCESS", S::kIntListToInt, F::kAccess, L::kNone},
    {OpId(2), "COUNT(>0)", S::kListToInt, F::kCount, L::kPositive},
    {OpId(3), "COUNT(<0)", S::kListToInt, F::kCount, L::kNegative},
    {OpId(4), "COUNT(odd)", S::kListToInt, F::kCount, L::kOdd},
    {OpId(5), "COUNT(even)", S::kListToInt, F::kCount, L::kEven},
    {OpId(6), "HEAD", S::kListToInt, F::kHead, L::kNone},
    {OpId(7), "LAST", S::kListToInt, F::kLast, L::kNone},
    {OpId(8), "MINIMUM", S::kListToInt, F::kMinimum, L::kNone},
    {OpId(9), "MAXIMUM", S::kListToInt, F::kMaximum, L::kNone},
    {OpId(10), "SEARCH", S::kIntListToInt, F::kSearch, L::kNone},
    {OpId(11), "SUM", S::kListToInt, F::kSum, L::kNone},
    {OpId(12), "DELETE", S::kIntListToList, F::kDelete, L::kNone},
    {OpId(13), "DROP", S::kIntListToList, F::kDrop, L::kNone},
    {OpId(14), "FILTER(>0)", S::kListToList, F::kFilter, L::kPositive},
    {OpId(15), "FILTER(<0)", S::kListToList, F::kFilter, L::kNegative},
    {OpId(16), "FILTER(odd)", S::kListToList, F::kFilter, L::kOdd},
    {OpId(17), "FILTER(even)", S::kListToList, F::kFilter, L::kEven},
    {OpId(18), "INSERT", S::kIntListToList, F::kInsert, L::kNone},
    {OpId(19), "MAP(+1)", S::kListToList, F::kMap, L::kPlus1},
    {OpId(20), "MAP(-1)", S::kListToList, F::kMap, L::kMinus1},
    {OpId(21), "MAP(*2)", S::kListToList, F::kMap, L::kTimes2},
    {OpId(22), "MAP(*3)", S::kListToList, F::kMap, L::kTimes3},
    {OpId(23), "MAP(*4)", S::kListToList, F::kMap, L::kTimes4},
    {OpId(24), "MAP(/2)", S::kListToList, F::kMap, L::kDiv2},
    {OpId(25), "MAP(/3)", S::kListToList, F::kMap, L::kDiv3},
    {OpId(26), "MAP(/4)", S::kListToList, F::kMap, L::kDiv4},
    {OpId(27), "MAP(*(-1))", S::kListToList, F::kMap, L::kNegate},
    {OpId(28), "MAP(^2)", S::kListToList, F::kMap, L::kSquare},
    {OpId(29), "REVERSE", S::kListToList, F::kReverse, L::kNone},
    {OpId(30), "SCANL1(+)", S::kListToList, F::kScanl1, L::kAdd},
    {OpId(31), "SCANL1(-)", S::kListToList, F::kScanl1, L::kSub},
    {OpId(32), "SCANL1(*)", S::kListToList, F::kScanl1, L::kMul},
    {OpId(33), "SCANL1(min)", S::kListToList, F::kScanl1, L::kMin},
    {OpId(34), "SCANL1(max)", S::kListToList, F::kScanl1, L::kMax},
    {OpId(35), "SORT", S::kListToList, F::kSort, L::kNone},
    {OpId(36), "TAKE", S::kIntListToList, F::kTake, L::kNone},
    {OpId(37), "ZIPWITH(+)", S::kListListToList, F::kZipWith, L::kAdd},
    {OpId(38), "ZIPWITH(-)", S::kListListToList, F::kZipWith, L::kSub},
    {OpId(39), "ZIPWITH(*)", S::kListListToList, F::kZipWith, L::kMul},
    {OpId(40), "ZIPWITH(min)", S::kListListToList, F::kZipWith, L::kMin},
    {OpId(41), "ZIPWITH(max)", S::kListListToList, F::kZipWith, L::kMax},
}};

constexpr std::array<Type, 1> kList1 = {Type::kList};
constexpr std::array<Type, 2> kIntList = {Type::kInt, Type::kList};
constexpr std::array<Type, 2> kListList = {Type::kList, Type::kList};

constexpr Int kMax = std::numeric_limits<Int>::max();
constexpr Int kMin = std::numeric_limits<Int>::min();

bool holds(Lambda pred, Int x) {
  switch (pred) {
    case L::kPositive: return x > 0;
    case L::kNegative: return x < 0;
    case L::kOdd: return x % 2 != 0;
    case L::kEven: return x % 2 == 0;
    default: break;
  }
  fail(ErrorCode::kContractViolation, "lambda is not a predicate");
}

Int map_one(Lambda f, Int x) {
  switch (f) {
    case L::kPlus1: return sat_add(x, 1);
    case L::kMinus1: return sat_sub(x, 1);
    case L::kTimes2: return sat_mul(x, 2);
    case L::kTimes3: return sat_mul(x, 3);
    case L::kTimes4: return sat_mul(x, 4);
    case L::kDiv2: return x / 2;
    case L::kDiv3: return x / 3;
    case L::kDiv4: return x / 4;
    case L::kNegate: return sat_mul(x, -1);
    case L::kSquare: return sat_mul(x, x);
    default: break;
  }
  fail(ErrorCode::kContractViolation, "lambda is not a unary map");
}

Int combine(Lambda f, Int a, Int b) {
  switch (f) {
    case L::kAdd: return sat_add(a, b);
    case L::kSub: return sat_sub(a, b);
    case L::kMul: return sat_mul(a, b);
    case L::kMin: return std::min(a, b);
    case L::kMax: return std::max(a, b);
    default: break;
  }
  fail(ErrorCode::kContractViolation, "lambda is not binary");
}

// Clamp an integer count into [0, len].
std::size_t clamp_count(Int n, std::size_t len) {
  if (n <= 0) return 0;
  return static_cast<std::uint64_t>(n) >= len ? len
                                              : static_cast<std::size_t>(n);
}

Value eval_list_to_int(const OperationDescriptor& op, const List& xs) {
  switch (op.family) {
    case F::kCount:
      return static_cast<Int>(std::count_if(
          xs.begin(), xs.end(), [&](Int x) { return holds(op.lambda, x); }));
    case F::kHead: return xs.empty() ? Int{0} : xs.front();
    case F::kLast: return xs.empty() ? Int{0} : xs.back();
    case F::kMinimum:
      return xs.empty() ? Int{0} : *std::min_element(xs.begin(), xs.end());
    case F::kMaximum:
      return xs.empty() ? Int{0} : *std::max_element(xs.begin(), xs.end());
    case F::kSum: {
      Int acc = 0;
      for (Int x : xs) acc = sat_add(acc, x);
      return acc;
    }
    default: break;
  }
  fail(ErrorCode::kContractViolation, "bad [] -> int family");
}

Value eval_list_to_list(const OperationDescriptor& op, const List& xs) {
  List out;
  switch (op.family) {
    case F::kFilter:
      out.reserve(xs.size());
      std::copy_if(xs.begin(), xs.end(), std::back_inserter(out),
                   [&](Int x) { return holds(op.lambda, x); });
      return out;
    case F::kMap:
      out.resize(xs.size());
      std::transform(xs.begin(), xs.end(), out.begin(),
                     [&](Int x) { return map_one(op.lambda, x); });
      return out;
    case F::kReverse:
      return List(xs.rbegin(), xs.rend());
    case F::kSort:
      out = xs;
      std::sort(out.begin(), out.end());
      return out;
    case F::kScanl1:
      out.resize(xs.size());
      for (std::size_t n = 0; n < xs.size(); ++n)
        out[n] = n == 0 ? xs[0] : combine(op.lambda, xs[n], out[n - 1]);
      return out;
    default: break;
  }
  fail(ErrorCode::kContractViolation, "bad [] -> [] family");
}

Value eval_int_list(const OperationDescriptor& op, Int n, const List& xs) {
  switch (op.family) {
    case F::kAccess:
      return n >= 0 && static_cast<std::uint64_t>(n) < xs.size()
                 ? xs[static_cast<std::size_t>(n)]
                 : Int{0};
    case F::kSearch: {
      auto it = std::find(xs.begin(), xs.end(), n);
      return it == xs.end() ? Int{-1} : static_cast<Int>(it - xs.begin());
    }
    case F::kDelete: {
      List out;
      out.reserve(xs.size());
      std::copy_if(xs.begin(), xs.end(), std::back_inserter(out),
                   [n](Int x) { return x != n; });
      return out;
    }
    case F::kDrop:
      return List(xs.begin() + static_cast<std::ptrdiff_t>(
                                   clamp_count(n, xs.size())),
                  xs.end());
    case F::kTake:
      return List(xs.begin(), xs.begin() + static_cast<std::ptrdiff_t>(
                                               clamp_count(n, xs.size())));
    case F::kInsert: {
      List out(xs);
      out.push_back(n);
      return out;
    }
    default: break;
  }
  fail(ErrorCode::kContractViolation, "bad int,[] family");
}

Value eval_zip(const OperationDescriptor& op, const List& a, const List& b) {
  List out(std::min(a.size(), b.size()));
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = combine(op.lambda, a[i], b[i]);
  return out;
}

}  // namespace

Int sat_add(Int a, Int b) {
  Int r;
  if (__builtin_add_overflow(a, b, &r)) return b > 0 ? kMax : kMin;
  return r;
}

Int sat_sub(Int a, Int b) {
  Int r;
  if (__builtin_sub_overflow(a, b, &r)) return b < 0 ? kMax : kMin;
  return r;
}

Int sat_mul(Int a, Int b) {
  Int r;
  if (__builtin_mul_overflow(a, b, &r)) return (a < 0) != (b < 0) ? kMin : kMax;
  return r;
}

std::span<const OperationDescriptor> operation_table() { return kTable; }

const OperationDescriptor& describe(OpId op) {
  require(op.value >= 1 && op.value <= kNumOps,
          "op id out of range: " + std::to_string(op.value));
  return kTable[static_cast<std::size_t>(op.index())];
}

std::optional<OpId> find_op(std::string_view name) {
  for (const auto& d : kTable)
    if (d.name == name) return d.id;
  return std::nullopt;
}

std::span<const Type> param_types(Signature sig) {
  switch (sig) {
    case S::kListToInt:
    case S::kListToList: return kList1;
    case S::kIntListToList:
    case S::kIntListToInt: return kIntList;
    case S::kListListToList: return kListList;
  }
  return {};
}

Type return_type(Signature sig) {
  return sig == S::kListToInt || sig == S::kIntListToInt ? Type::kInt
                                                         : Type::kList;
}

Value default_value(Type t) {
  return t == Type::kInt ? Value{Int{0}} : Value{List{}};
}

bool is_default(const Value& v) {
  if (const Int* i = std::get_if<Int>(&v)) return *i == 0;
  return std::get<List>(v).empty();
}

std::string to_string(const Value& v) {
  if (const Int* i = std::get_if<Int>(&v)) return std::to_string(*i);
  std::string s = "[";
  const auto& xs = std::get<List>(v);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(xs[i]);
  }
  return s + "]";
}

Value apply_op(const OperationDescriptor& op, std::span<const Value> args) {
  std::array<const Value*, 2> refs{};
  require(args.size() <= refs.size(), std::string(op.name) + ": too many arguments");
  for (std::size_t i = 0; i < args.size(); ++i) refs[i] = &args[i];
  return apply_op(op, std::span<const Value* const>(refs.data(), args.size()));
}

Value apply_op(const OperationDescriptor& op,
               std::span<const Value* const> args) {
  auto params = param_types(op.signature);
  require(args.size() == params.size(),
          std::string(op.name) + ": expected " +
              std::to_string(params.size()) + " arguments, got " +
              std::to_string(args.size()));
  for (std::size_t i = 0; i < params.size(); ++i)
    require(type_of(*args[i]) == params[i],
            std::string(op.name) + ": argument " + std::to_string(i) +
                " has the wrong type");

  switch (op.signature) {
    case S::kListToInt: return eval_list_to_int(op, std::get<List>(*args[0]));
    case S::kListToList:
      return eval_list_to_list(op, std::get<List>(*args[0]));
    case S::kIntListToList:
    case S::kIntListToInt:
      return eval_int_list(op, std::get<Int>(*args[0]),
                           std::get<List>(*args[1]));
    case S::kListListToList:
      return eval_zip(op, std::get<List>(*args[0]), std::get<List>(*args[1]));
  }
  fail(ErrorCode::kContractViolation, "unknown signature");
}

}  // namespace genesyn::dsl
