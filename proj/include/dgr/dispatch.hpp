#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace dgr {

enum class Level { Low, High };

const char* level_name(Level level);
Level parse_level(std::string_view text);

struct PinAction {
  int pin = 0;
  Level level = Level::Low;

  friend bool operator==(const PinAction&, const PinAction&) = default;
};

/// label (0..25) -> action. At most one binding per label.
using Bindings = std::map<int, PinAction>;

inline constexpr int kLedPin = 17;

/// 'A' drives the LED pin high, 'C' drives it low.
Bindings default_bindings();

/// Lines "LETTER PIN LEVEL", e.g. "A 17 HIGH". Blank lines and '#'
/// comments are ignored. Duplicate letters are a FormatError.
Bindings parse_bindings(std::istream& in);
Bindings load_bindings(const std::filesystem::path& path);

struct GpioEvent {
  std::uint64_t seq = 0;
  int pin = 0;
  Level level = Level::Low;
};

/// Seam for real pins. VirtualGpio forwards every write to an attached driver.
class PinDriver {
 public:
  virtual ~PinDriver() = default;
  virtual void write(int pin, Level level) = 0;
};

/// Pin map plus an append-only write log. Replaying the log from an empty
/// map reproduces `pins()`.
class VirtualGpio {
 public:
  void write(int pin, Level level);
  std::optional<Level> level(int pin) const;

  const std::map<int, Level>& pins() const { return pins_; }
  const std::vector<GpioEvent>& log() const { return log_; }

  void attach(std::shared_ptr<PinDriver> driver) { driver_ = std::move(driver); }

 private:
  std::map<int, Level> pins_;
  std::vector<GpioEvent> log_;
  std::shared_ptr<PinDriver> driver_;
};

struct DispatchReport {
  int label = 0;
  std::optional<PinAction> action;  // absent when the label is unbound
  std::string warning;
};

/// Applies the action bound to `label`; an unbound label is a no-op that
/// carries a warning.
DispatchReport dispatch(int label, const Bindings& bindings, VirtualGpio& gpio);

std::map<int, Level> replay(std::span<const GpioEvent> log);

/// "seq,pin,level" header then one row per event.
void write_event_log_csv(std::ostream& out, std::span<const GpioEvent> log);

}  // namespace dgr
