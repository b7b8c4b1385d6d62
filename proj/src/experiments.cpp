namespace floq {
namespace {
constexpr int placeholder_experiments = 0;
}
}
