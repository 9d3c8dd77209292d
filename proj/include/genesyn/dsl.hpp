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

#pragma once

// The list DSL: values, the 41-operation table, implicit type-directed
// argument resolution, the interpreter and the '|'-separated program text
// format.

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace genesyn::dsl {

using Int = std::int64_t;
using List = std::vector<Int>;
using Value = std::variant<Int, List>;

enum class Type : std::uint8_t { kInt, kList };

inline Type type_of(const Value& v) {
  return std::holds_alternative<Int>(v) ? Type::kInt : Type::kList;
}

// Default a missing argument of the given type resolves to.
Value default_value(Type t);
bool is_default(const Value& v);
std::string to_string(const Value& v);

inline constexpr int kNumOps = 41;

// Operation id in [1, kNumOps], numbered as in the reference DSL listing.
struct OpId {
  std::uint8_t value = 1;

  constexpr OpId() = default;
  constexpr explicit OpId(int v) : value(static_cast<std::uint8_t>(v)) {}

  constexpr int index() const { return value - 1; }  // 0-based table slot
  friend constexpr auto operator<=>(OpId, OpId) = default;
};

enum class Signature : std::uint8_t {
  kListToInt,       // [] -> int
  kListToList,      // [] -> []
  kIntListToList,   // int, [] -> []
  kListListToList,  // [], [] -> []
  kIntListToInt,    // int, [] -> int
};

enum class Family : std::uint8_t {
  kAccess, kCount, kHead, kLast, kMinimum, kMaximum, kSearch, kSum,
  kDelete, kDrop, kFilter, kInsert, kMap, kReverse, kScanl1, kSort, kTake,
  kZipWith,
};

enum class Lambda : std::uint8_t {
  kNone,
  // predicates
  kPositive, kNegative, kOdd, kEven,
  // unary maps
  kPlus1, kMinus1, kTimes2, kTimes3, kTimes4, kDiv2, kDiv3, kDiv4, kNegate,
  kSquare,
  // binary
  kAdd, kSub, kMul, kMin, kMax,
};

struct OperationDescriptor {
  OpId id;
  std::string_view name;
  Signature signature;
  Family family;
  Lambda lambda;
};

std::span<const OperationDescriptor> operation_table();
const OperationDescriptor& describe(OpId op);
std::optional<OpId> find_op(std::string_view name);

std::span<const Type> param_types(Signature sig);
Type return_type(Signature sig);

struct Program {
  std::vector<OpId> ops;

  std::size_t length() const { return ops.size(); }
  bool operator==(const Program&) const = default;
};

// Genes and programs are in one-to-one correspondence.
using Gene = Program;

struct IOExample {
  List input;
  Value output;

  bool operator==(const IOExample&) const = default;
};

struct ExampleSet {
  std::vector<IOExample> examples;

  std::size_t size() const { return examples.size(); }
  const IOExample& operator[](std::size_t i) const { return examples[i]; }
  bool operator==(const ExampleSet&) const = default;
};

// Where a statement argument comes from. Statement sources index into the
// program; resolution depends only on signatures, so it is static.
struct ArgSource {
  enum class Kind : std::uint8_t { kStatement, kInput, kDefault };
  Kind kind = Kind::kDefault;
  std::size_t statement = 0;

  bool operator==(const ArgSource&) const = default;
};

// Saturating 64-bit arithmetic shared by the lambdas.
Int sat_add(Int a, Int b);
Int sat_sub(Int a, Int b);
Int sat_mul(Int a, Int b);

Value apply_op(const OperationDescriptor& op, std::span<const Value> args);
Value apply_op(const OperationDescriptor& op,
               std::span<const Value* const> args);

// Sources for each parameter of the statement at `position`, in declaration
// order. Each parameter claims the most recent unclaimed earlier statement
// whose output type matches, else the program input (a list), else a default.
std::vector<ArgSource> resolve_sources(const Program& program,
                                       std::size_t position);

std::vector<Value> resolve_args(const Program& program, std::size_t position,
                                std::span<const Value> history,
                                const List& program_input);

Value run_program(const Program& program, const List& input);

// Runs the program on every example input; one output per example.
std::vector<Value> run_on_examples(const Program& program,
                                   const ExampleSet& examples);

bool check_equivalence(const Program& candidate, const ExampleSet& examples);
bool outputs_match(std::span<const Value> outputs, const ExampleSet& examples);

Type output_type(const Program& program);

// "FILTER(>0)|MAP(*2)|SORT|REVERSE". Throws Error(kData) naming the first
// unknown operation and its position.
Program parse_program(std::string_view text);
std::string format_program(const Program& program);

}  // namespace genesyn::dsl
