#include <benchmark/benchmark.h>

#include <string>
#include <vector>

#include "socratic/analytics/survey.hpp"
#include "socratic/dialogue/policy.hpp"
#include "socratic/prompt/json_extract.hpp"
#include "socratic/prompt/template.hpp"

namespace {

using namespace socratic;

std::string model_output(int objects) {
    std::string text = "Sure! Here are the concepts.\n";
    for (int i = 0; i < objects; ++i) {
        text += "```json\n{\"theKC\": \"Concept " + std::to_string(i) +
                "\", \"theContext\": \"A {braced} context\", \"nested\": {\"a\": [1, 2.5, true, null]}}\n```\n";
    }
    return text + "Let me know if you need more.";
}

void BM_ExtractJsonObjects(benchmark::State& state) {
    const auto text = model_output(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(prompt::find_json_objects(text));
    state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * text.size()));
}
BENCHMARK(BM_ExtractJsonObjects)->Arg(1)->Arg(5)->Arg(20);

void BM_RenderLessonCreation(benchmark::State& state) {
    const auto& tmpl = prompt::TemplateLibrary::bundled().get(prompt::template_id::kLessonCreation);
    prompt::VariableSet vars;
    for (const auto& name : tmpl.placeholders()) vars.set(name, "value of " + name);
    for (auto _ : state) benchmark::DoNotOptimize(prompt::render(tmpl, vars));
}
BENCHMARK(BM_RenderLessonCreation);

void BM_SelectPromptType(benchmark::State& state) {
    std::size_t index = 0;
    for (auto _ : state) {
        const dialogue::PolicyInput in{static_cast<int>(index % 5), static_cast<int>(index % 3),
                                       static_cast<int>(index % 2), index % 12};
        benchmark::DoNotOptimize(dialogue::select_prompt_type(in, static_cast<dialogue::Classification>(index % 4)));
        ++index;
    }
}
BENCHMARK(BM_SelectPromptType);

void BM_SummarizeLikert(benchmark::State& state) {
    std::vector<analytics::SurveyResponse> responses(static_cast<std::size_t>(state.range(0)));
    for (std::size_t i = 0; i < responses.size(); ++i) {
        responses[i].participant_id = "P" + std::to_string(i);
        for (std::size_t q = 0; q < responses[i].scores.size(); ++q) {
            responses[i].scores[q] = static_cast<int>((i * 7 + q * 3) % 7) + 1;
        }
    }
    for (auto _ : state) benchmark::DoNotOptimize(analytics::summarize(responses));
}
BENCHMARK(BM_SummarizeLikert)->Arg(10)->Arg(1000);

}  // namespace

BENCHMARK_MAIN();
