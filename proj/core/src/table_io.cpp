#include "acx/table_io.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

namespace acx {

namespace {

using nlohmann::json;

std::string format_double(double v)
{
   char buf[64];
   std::snprintf(buf, sizeof buf, "%.17g", v);
   return buf;
}

double parse_double(const std::string& field, const std::string& what)
{
   if (field.empty()) {
      throw ConfigError("empty " + what + " field");
   }
   char* end = nullptr;
   const double v = std::strtod(field.c_str(), &end);
   if (end != field.c_str() + field.size()) {
      throw ConfigError("bad " + what + " value '" + field + "'");
   }
   return v;
}

std::size_t parse_count(const std::string& field, const std::string& what)
{
   try {
      std::size_t used = 0;
      const unsigned long long v = std::stoull(field, &used);
      if (used != field.size() || field.front() == '-') {
         throw std::invalid_argument(field);
      }
      return static_cast<std::size_t>(v);
   } catch (const std::logic_error&) {
      throw ConfigError("bad " + what + " value '" + field + "'");
   }
}

void check_name(const std::string& name)
{
   if (name.find_first_of(",\"\n\r") != std::string::npos) {
      throw ConfigError("name '" + name + "' cannot be written to CSV");
   }
}

std::vector<std::string> split(const std::string& line)
{
   std::vector<std::string> fields;
   std::string field;
   std::stringstream in(line);
   while (std::getline(in, field, ',')) {
      fields.push_back(field);
   }
   if (!line.empty() && line.back() == ',') {
      fields.emplace_back();
   }
   return fields;
}

std::ofstream open_out(const std::filesystem::path& path)
{
   std::ofstream out(path);
   if (!out) {
      throw ConfigError("cannot open '" + path.string() + "' for writing");
   }
   return out;
}

void check_written(const std::ofstream& out, const std::filesystem::path& path)
{
   if (!out) {
      throw ConfigError("write to '" + path.string() + "' failed");
   }
}

json number_or_null(double v)
{
   return std::isfinite(v) ? json(v) : json(nullptr);
}

double number_from(const json& j, double fallback)
{
   return j.is_null() ? fallback : j.get<double>();
}

}  // namespace

TableFormat parse_format(const std::string& text)
{
   if (text == "csv") {
      return TableFormat::Csv;
   }
   if (text == "json") {
      return TableFormat::Json;
   }
   throw ConfigError("unknown format '" + text + "' (expected csv or json)");
}

void write_table(const ProfileTable& table, std::ostream& out, TableFormat format)
{
   ProfileTable sorted = table;
   sorted.sort();
   if (format == TableFormat::Json) {
      json rows = json::array();
      for (const auto& r : sorted.rows) {
         rows.push_back({{"problem", r.problem},
                         {"draw", r.draw},
                         {"algorithm", r.algorithm},
                         {"time_ms", number_or_null(r.time_ms)},
                         {"maps", r.maps},
                         {"grad_evals", r.grad_evals},
                         {"obj_evals", r.obj_evals},
                         {"converged", r.converged},
                         {"final_objective", number_or_null(r.final_objective)}});
      }
      out << rows.dump(2) << '\n';
      return;
   }
   out << kResultsHeader << '\n';
   for (const auto& r : sorted.rows) {
      check_name(r.problem);
      check_name(r.algorithm);
      out << r.problem << ',' << r.draw << ',' << r.algorithm << ','
          << (std::isfinite(r.time_ms) ? format_double(r.time_ms) : "") << ',' << r.maps << ','
          << r.grad_evals << ',' << r.obj_evals << ',' << (r.converged ? 1 : 0) << ','
          << format_double(r.final_objective) << '\n';
   }
}

void write_table(const ProfileTable& table, const std::filesystem::path& path, TableFormat format)
{
   auto out = open_out(path);
   write_table(table, out, format);
   check_written(out, path);
}

ProfileTable read_table(std::istream& in, TableFormat format)
{
   const double inf = std::numeric_limits<double>::infinity();
   ProfileTable table;
   if (format == TableFormat::Json) {
      json rows;
      try {
         in >> rows;
         for (const auto& j : rows) {
            ProfileRow r;
            r.problem = j.at("problem").get<std::string>();
            r.draw = j.at("draw").get<std::size_t>();
            r.algorithm = j.at("algorithm").get<std::string>();
            r.time_ms = number_from(j.at("time_ms"), inf);
            r.maps = j.at("maps").get<std::size_t>();
            r.grad_evals = j.at("grad_evals").get<std::size_t>();
            r.obj_evals = j.at("obj_evals").get<std::size_t>();
            r.converged = j.at("converged").get<bool>();
            r.final_objective =
                number_from(j.at("final_objective"), std::numeric_limits<double>::quiet_NaN());
            table.rows.push_back(std::move(r));
         }
      } catch (const json::exception& e) {
         throw ConfigError(std::string("malformed results JSON: ") + e.what());
      }
      return table;
   }

   std::string line;
   if (!std::getline(in, line) || line != kResultsHeader) {
      throw ConfigError("results CSV must start with the header '" + std::string(kResultsHeader) + "'");
   }
   while (std::getline(in, line)) {
      if (line.empty()) {
         continue;
      }
      const auto f = split(line);
      if (f.size() != 9) {
         throw ConfigError("results row needs 9 fields: '" + line + "'");
      }
      ProfileRow r;
      r.problem = f[0];
      r.draw = parse_count(f[1], "draw");
      r.algorithm = f[2];
      r.time_ms = f[3].empty() ? inf : parse_double(f[3], "time_ms");
      r.maps = parse_count(f[4], "maps");
      r.grad_evals = parse_count(f[5], "grad_evals");
      r.obj_evals = parse_count(f[6], "obj_evals");
      if (f[7] != "0" && f[7] != "1") {
         throw ConfigError("bad converged value '" + f[7] + "'");
      }
      r.converged = f[7] == "1";
      r.final_objective = parse_double(f[8], "final_objective");
      table.rows.push_back(std::move(r));
   }
   return table;
}

ProfileTable read_table(const std::filesystem::path& path)
{
   std::ifstream in(path);
   if (!in) {
      throw ConfigError("cannot open '" + path.string() + "'");
   }
   const auto format = path.extension() == ".json" ? TableFormat::Json : TableFormat::Csv;
   try {
      return read_table(in, format);
   } catch (const ConfigError& e) {
      throw ConfigError(path.string() + ": " + e.what());
   }
}

void write_profile(const std::vector<ProfileCurve>& curves, std::ostream& out)
{
   out << kProfileHeader << '\n';
   for (const auto& c : curves) {
      check_name(c.algorithm);
      for (std::size_t i = 0; i < c.tau.size(); ++i) {
         out << c.algorithm << ',' << format_double(c.tau[i]) << ',' << format_double(c.fraction[i])
             << '\n';
      }
   }
}

void write_profile(const std::vector<ProfileCurve>& curves, const std::filesystem::path& path)
{
   auto out = open_out(path);
   write_profile(curves, out);
   check_written(out, path);
}

void write_trajectory(const std::vector<TrajectoryPoint>& points, const std::filesystem::path& path)
{
   auto out = open_out(path);
   out << "iteration,maps,residual,objective,sigma,order\n";
   for (const auto& p : points) {
      out << p.iteration << ',' << p.maps << ',' << format_double(p.residual) << ','
          << (p.objective ? format_double(*p.objective) : "") << ',' << format_double(p.sigma) << ','
          << p.order << '\n';
   }
   check_written(out, path);
}

}  // namespace acx
