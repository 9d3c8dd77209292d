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

#include <array>

#include "genesyn/dsl.hpp"
#include "genesyn/error.hpp"

namespace genesyn::dsl {
namespace {

void check_program(const Program& program) {
  require(program.length() >= 1, "program must have at least one statement");
  for (OpId op : program.ops)
    require(op.value >= 1 && op.value <= kNumOps,
            "op id out of range: " + std::to_string(op.value));
}

// At most two parameters per signature, so sources fit in a fixed array.
struct Sources {
  std::array<ArgSource, 2> items;
  std::size_t count = 0;
};

Sources sources_at(const Program& program, std::size_t position) {
  Sources out;
  auto params = param_types(describe(program.ops[position]).signature);
  out.count = params.size();
  for (std::size_t p = 0; p < params.size(); ++p) {
    ArgSource src{params[p] == Type::kList ? ArgSource::Kind::kInput
                                           : ArgSource::Kind::kDefault,
                  0};
    for (std::size_t k = position; k-- > 0;) {
      if (return_type(describe(program.ops[k]).signature) != params[p])
        continue;
      bool taken = false;
      for (std::size_t q = 0; q < p; ++q)
        taken |= out.items[q].kind == ArgSource::Kind::kStatement &&
                 out.items[q].statement == k;
      if (taken) continue;
      src = {ArgSource::Kind::kStatement, k};
      break;
    }
    out.items[p] = src;
  }
  return out;
}

}  // namespace

std::vector<ArgSource> resolve_sources(const Program& program,
                                       std::size_t position) {
  check_program(program);
  require(position < program.length(), "statement position out of range");
  Sources s = sources_at(program, position);
  return {s.items.begin(), s.items.begin() + static_cast<std::ptrdiff_t>(s.count)};
}

std::vector<Value> resolve_args(const Program& program, std::size_t position,
                                std::span<const Value> history,
                                const List& program_input) {
  require(history.size() >= position,
          "history must hold the outputs of all earlier statements");
  auto params = param_types(describe(program.ops.at(position)).signature);
  std::vector<Value> args;
  for (std::size_t p = 0; const ArgSource& src :
                          resolve_sources(program, position)) {
    switch (src.kind) {
      case ArgSource::Kind::kStatement:
        args.push_back(history[src.statement]);
        break;
      case ArgSource::Kind::kInput:
        args.emplace_back(program_input);
        break;
      case ArgSource::Kind::kDefault:
        args.push_back(default_value(params[p]));
        break;
    }
    ++p;
  }
  return args;
}

Value run_program(const Program& program, const List& input) {
  check_program(program);
  static const Value kZero{Int{0}};
  static const Value kEmpty{List{}};
  const Value input_value{input};

  std::vector<Value> history;
  history.reserve(program.length());
  for (std::size_t i = 0; i < program.length(); ++i) {
    const OperationDescriptor& op = describe(program.ops[i]);
    Sources s = sources_at(program, i);
    std::array<const Value*, 2> args{};
    for (std::size_t p = 0; p < s.count; ++p) {
      const ArgSource& src = s.items[p];
      switch (src.kind) {
        case ArgSource::Kind::kStatement: args[p] = &history[src.statement]; break;
        case ArgSource::Kind::kInput: args[p] = &input_value; break;
        case ArgSource::Kind::kDefault:
          args[p] = param_types(op.signature)[p] == Type::kInt ? &kZero : &kEmpty;
          break;
      }
    }
    history.push_back(
        apply_op(op, std::span<const Value* const>(args.data(), s.count)));
  }
  return std::move(history.back());
}

std::vector<Value> run_on_examples(const Program& program,
                                   const ExampleSet& examples) {
  std::vector<Value> outs;
  outs.reserve(examples.size());
  for (const IOExample& ex : examples.examples)
    outs.push_back(run_program(program, ex.input));
  return outs;
}

bool outputs_match(std::span<const Value> outputs, const ExampleSet& examples) {
  if (outputs.size() != examples.size()) return false;
  for (std::size_t j = 0; j < outputs.size(); ++j)
    if (outputs[j] != examples[j].output) return false;
  return true;
}

bool check_equivalence(const Program& candidate, const ExampleSet& examples) {
  for (const IOExample& ex : examples.examples)
    if (run_program(candidate, ex.input) != ex.output) return false;
  return true;
}

Type output_type(const Program& program) {
  check_program(program);
  return return_type(describe(program.ops.back()).signature);
}

}  // namespace genesyn::dsl
