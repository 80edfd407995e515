#include "lanet/csv.hpp"

namespace lanet::csv {

std::optional<std::vector<std::string>> read_record(std::istream& in) {
    std::vector<std::string> fields;
    std::string field;
    bool in_quotes = false;
    bool saw_any = false;

    int ci;
    while ((ci = in.get()) != EOF) {
        const char c = static_cast<char>(ci);
        saw_any = true;
        if (in_quotes) {
            if (c == '"') {
                if (in.peek() == '"') {
                    in.get();
                    field.push_back('"');
                } else {
                    in_quotes = false;
                }
            } else {
                field.push_back(c);
            }
            continue;
        }
        switch (c) {
            case '"':
                in_quotes = true;
                break;
            case ',':
                fields.push_back(std::move(field));
                field.clear();
                break;
            case '\r':
                if (in.peek() == '\n') in.get();
                fields.push_back(std::move(field));
                return fields;
            case '\n':
                fields.push_back(std::move(field));
                return fields;
            default:
                field.push_back(c);
        }
    }
    if (!saw_any) return std::nullopt;
    fields.push_back(std::move(field));
    return fields;
}

std::vector<std::vector<std::string>> read_all(std::istream& in) {
    std::vector<std::vector<std::string>> records;
    while (auto record = read_record(in)) {
        records.push_back(std::move(*record));
    }
    if (!records.empty() && !records.front().empty()) {
        std::string& first = records.front().front();
        if (first.size() >= 3 && first[0] == '\xEF' && first[1] == '\xBB' && first[2] == '\xBF') {
            first.erase(0, 3);
        }
    }
    return records;
}

std::string escape_field(const std::string& field) {
    if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

std::string format_record(const std::vector<std::string>& fields) {
    std::string line;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) line.push_back(',');
        line += escape_field(fields[i]);
    }
    line.push_back('\n');
    return line;
}

}  // namespace lanet::csv
