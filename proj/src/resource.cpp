#include "lanet/resource.hpp"

#include <algorithm>
#include <cctype>

namespace lanet {

std::string_view kind_prefix(ResourceKind kind) {
    switch (kind) {
        case ResourceKind::LectureNotes: return "ln";
        case ResourceKind::Video: return "vid";
        case ResourceKind::Quiz: return "quiz";
        case ResourceKind::Submission: return "sub";
    }
    return "ln";
}

std::optional<ResourceKind> kind_from_prefix(std::string_view prefix) {
    if (prefix == "ln") return ResourceKind::LectureNotes;
    if (prefix == "vid") return ResourceKind::Video;
    if (prefix == "quiz") return ResourceKind::Quiz;
    if (prefix == "sub") return ResourceKind::Submission;
    return std::nullopt;
}

std::string ResourceId::name() const {
    return std::string(kind_prefix(kind)) + "_" + std::to_string(chapter);
}

std::optional<ResourceId> ResourceId::parse(std::string_view text, int max_chapter) {
    const auto underscore = text.rfind('_');
    if (underscore == std::string_view::npos || underscore == 0 ||
        underscore + 1 >= text.size()) {
        return std::nullopt;
    }
    const auto kind = kind_from_prefix(text.substr(0, underscore));
    if (!kind) return std::nullopt;

    std::string_view digits = text.substr(underscore + 1);
    if (digits.size() > 6) return std::nullopt;
    int chapter = 0;
    for (char c : digits) {
        if (!std::isdigit(static_cast<unsigned char>(c))) return std::nullopt;
        chapter = chapter * 10 + (c - '0');
    }
    if (chapter < 1) return std::nullopt;
    if (max_chapter > 0 && chapter > max_chapter) return std::nullopt;
    return ResourceId{*kind, chapter};
}

std::vector<ResourceId> canonical_order(std::vector<ResourceId> resources) {
    std::sort(resources.begin(), resources.end());
    resources.erase(std::unique(resources.begin(), resources.end()), resources.end());
    return resources;
}

}  // namespace lanet
