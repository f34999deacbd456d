#include "mixpred/class_config.hpp"

#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace mixpred {

namespace {

ClassSpec bernoulli_grid(int k, int truth, const std::string& name) {
  std::vector<std::shared_ptr<const Measure>> models;
  models.reserve(static_cast<size_t>(k));
  for (int i = 0; i < k; ++i)
    models.push_back(std::make_shared<BernoulliMeasure>(
        static_cast<double>(i) / static_cast<double>(k - 1)));
  return ClassSpec{std::make_shared<ModelClass>(ModelClass::uniform(std::move(models))),
                   truth, name};
}

ClassSpec fixc() {
  std::vector<std::shared_ptr<const Measure>> models;
  models.push_back(std::make_shared<Lebesgue>(Alphabet(2)));
  models.push_back(std::make_shared<AllOnes>());
  return ClassSpec{std::make_shared<ModelClass>(ModelClass::uniform(std::move(models))),
                   0, "fixc"};
}

ClassSpec fixa() {
  std::vector<std::shared_ptr<const Measure>> models;
  for (int k = 0; k < 4; ++k) models.push_back(std::make_shared<OnesThenZeros>(k));
  return ClassSpec{std::make_shared<ModelClass>(ModelClass::uniform(std::move(models))),
                   3, "fixa"};
}

std::vector<double> parse_doubles(const std::string& s) {
  std::istringstream iss(s);
  std::vector<double> out;
  double v;
  while (iss >> v) out.push_back(v);
  return out;
}

}  // namespace

ClassSpec resolve_class(const std::string& name_or_path) {
  if (name_or_path == "appendix") return bernoulli_grid(41, 20, "appendix");
  if (name_or_path == "uniform21") return bernoulli_grid(21, 10, "uniform21");
  if (name_or_path == "fixc") return fixc();
  if (name_or_path == "fixa") return fixa();
  return parse_class_file(name_or_path);
}

ClassSpec parse_class_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open class file: " + path);

  std::map<std::string, std::string> kv;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }

  const auto family = kv.count("family") ? kv["family"] : "";
  const int truth = kv.count("truth") ? std::stoi(kv["truth"]) : 0;

  std::vector<std::shared_ptr<const Measure>> models;
  if (family == "bernoulli_grid") {
    const int k = std::stoi(kv.at("models"));
    if (k < 2) throw std::runtime_error("bernoulli_grid needs models >= 2");
    for (int i = 0; i < k; ++i)
      models.push_back(std::make_shared<BernoulliMeasure>(
          static_cast<double>(i) / static_cast<double>(k - 1)));
  } else if (family == "bernoulli_list") {
    for (double t : parse_doubles(kv.at("thetas")))
      models.push_back(std::make_shared<BernoulliMeasure>(t));
  } else if (family == "ones_then_zeros") {
    const int k = std::stoi(kv.at("models"));
    for (int i = 0; i < k; ++i) models.push_back(std::make_shared<OnesThenZeros>(i));
  } else if (family == "lebesgue_allones") {
    models.push_back(std::make_shared<Lebesgue>(Alphabet(2)));
    models.push_back(std::make_shared<AllOnes>());
  } else {
    throw std::runtime_error("unknown class family: '" + family + "'");
  }

  std::shared_ptr<const ModelClass> mc;
  if (kv.count("prior")) {
    mc = std::make_shared<ModelClass>(std::move(models), parse_doubles(kv["prior"]));
  } else {
    mc = std::make_shared<ModelClass>(ModelClass::uniform(std::move(models)));
  }
  if (truth < 0 || truth >= mc->size())
    throw std::runtime_error("truth index out of range");
  return ClassSpec{mc, truth, path};
}

}  // namespace mixpred
