#include "socratic/id.hpp"

#include <mutex>

#include <boost/uuid/random_generator.hpp>
#include <boost/uuid/string_generator.hpp>
#include <boost/uuid/uuid_io.hpp>

namespace socratic {

std::string new_id() {
    static std::mutex mutex;
    static boost::uuids::random_generator generator;
    std::lock_guard lock(mutex);
    return boost::uuids::to_string(generator());
}

bool is_valid_id(std::string_view id) {
    if (id.size() != 36) return false;
    try {
        auto parsed = boost::uuids::string_generator()(std::string(id));
        return boost::uuids::to_string(parsed) == id;
    } catch (const std::exception&) {
        return false;
    }
}

}  // namespace socratic
