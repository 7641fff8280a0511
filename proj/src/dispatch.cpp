#include "dgr/dispatch.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "dgr/dataset.hpp"
#include "dgr/errors.hpp"

namespace dgr {

const char* level_name(Level level) { return level == Level::High ? "HIGH" : "LOW"; }

Level parse_level(std::string_view text) {
  if (text == "HIGH" || text == "high" || text == "1") return Level::High;
  if (text == "LOW" || text == "low" || text == "0") return Level::Low;
  throw FormatError("bad pin level '" + std::string(text) + "'");
}

Bindings default_bindings() {
  return {{label_of('A'), {kLedPin, Level::High}}, {label_of('C'), {kLedPin, Level::Low}}};
}

Bindings parse_bindings(std::istream& in) {
  Bindings bindings;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream words(line);
    std::string letter, level;
    int pin = 0;
    if (!(words >> letter)) continue;
    if (!(words >> pin >> level) || letter.size() != 1) {
      throw FormatError("bindings line " + std::to_string(line_no) + ": expected 'LETTER PIN LEVEL'");
    }
    std::string extra;
    if (words >> extra) throw FormatError("bindings line " + std::to_string(line_no) + ": trailing text");
    int label = 0;
    try {
      label = label_of(letter.front());
    } catch (const InvalidArgument&) {
      throw FormatError("bindings line " + std::to_string(line_no) + ": not a letter");
    }
    if (!bindings.emplace(label, PinAction{pin, parse_level(level)}).second) {
      throw FormatError("bindings line " + std::to_string(line_no) + ": duplicate letter " + letter);
    }
  }
  return bindings;
}

Bindings load_bindings(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open bindings " + path.string());
  return parse_bindings(in);
}

void VirtualGpio::write(int pin, Level level) {
  pins_[pin] = level;
  log_.push_back({log_.size() + 1, pin, level});
  if (driver_) driver_->write(pin, level);
}

std::optional<Level> VirtualGpio::level(int pin) const {
  const auto it = pins_.find(pin);
  if (it == pins_.end()) return std::nullopt;
  return it->second;
}

DispatchReport dispatch(int label, const Bindings& bindings, VirtualGpio& gpio) {
  DispatchReport report;
  report.label = label;
  const auto it = bindings.find(label);
  if (it == bindings.end()) {
    report.warning = "no action bound to label " + std::to_string(label);
    return report;
  }
  gpio.write(it->second.pin, it->second.level);
  report.action = it->second;
  return report;
}

std::map<int, Level> replay(std::span<const GpioEvent> log) {
  std::map<int, Level> pins;
  for (const auto& e : log) pins[e.pin] = e.level;
  return pins;
}

void write_event_log_csv(std::ostream& out, std::span<const GpioEvent> log) {
  out << "seq,pin,level\n";
  for (const auto& e : log) out << e.seq << ',' << e.pin << ',' << level_name(e.level) << '\n';
}

}  // namespace dgr
