#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace homoclinic {

/// Shortest of %.17g; NaN/inf become null (not representable in JSON).
std::string format_double(double x);

/// Streaming JSON writer with stable key order (insertion order) and
/// 17-significant-digit floats, so identical inputs give identical bytes.
class JsonWriter {
 public:
  void begin_object();
  void end_object();
  void begin_array();
  void end_array();
  void key(std::string_view k);
  void value(double v);
  void value(int v);
  void value(long long v);
  void value(bool v);
  void value(std::string_view v);
  void value(const char* v) { value(std::string_view(v)); }
  void null_value();

  /// Finished document plus trailing newline.
  std::string str() const;

 private:
  void comma();
  std::string out_;
  std::vector<bool> first_;  // per open scope
  bool pending_key_ = false;
};

std::string json_escape(std::string_view s);

/// Comma-separated, header row, LF endings, UTF-8, 17-significant-digit
/// floats.
class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header);
  void row(const std::vector<double>& values);
  void raw_row(const std::vector<std::string>& cells);
  const std::string& str() const { return out_; }

 private:
  std::string out_;
  std::size_t columns_;
};

/// Writes bytes exactly as given (binary mode). Throws std::runtime_error on
/// I/O failure.
void write_file(const std::string& path, const std::string& contents);

}  // namespace homoclinic
